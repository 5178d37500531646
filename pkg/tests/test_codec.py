import math

import numpy as np
import pytest

from dsskit import (
    WILDCARD,
    Dss,
    EccFailure,
    IdentityCode,
    LengthMismatch,
    PayloadLengthError,
    RepetitionCode,
    SyncCode,
    TooLarge,
    WindowTooShort,
    comma_free_index_bruteforce,
    correlation_profile,
    decode_payload,
    difference_profile,
    dss_from_template,
    encode,
    format_symbols,
    h,
    locate_frame,
    parse_symbols,
    template_from_dss,
)
from helpers import PAPER_TEMPLATE, paper_dss, random_dss


def paper_code(ecc=None):
    dss = paper_dss()
    if ecc is None:
        ecc = RepetitionCode(13, 2, repeat=3)
    return SyncCode.build(dss, ecc)


class TestH:
    def test_definition(self):
        assert h(0, 1) == 1
        assert h(0, 0) == 0
        assert h(WILDCARD, 1) == 0
        assert h(1, WILDCARD) == 0
        assert h(WILDCARD, WILDCARD) == 0


class TestTemplate:
    def test_paper_string(self):
        template = template_from_dss(paper_dss())
        assert format_symbols(template.symbols, 2) == PAPER_TEMPLATE

    def test_empty_dss(self):
        template = template_from_dss(Dss.from_sets(3, [[], []]))
        assert format_symbols(template.symbols, 2) == "***"

    def test_round_trip_randomized(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            dss = random_dss(rng)
            assert dss_from_template(template_from_dss(dss)) == dss

    def test_wildcard_count(self):
        template = template_from_dss(paper_dss())
        assert len(template.wildcard_positions) == 25 - 12
        assert template.redundancy == 12


class TestCorrelationProfile:
    def test_paper_min_is_three(self):
        prof = correlation_profile(template_from_dss(paper_dss()))
        assert prof.index == 3

    def test_all_wildcards_zero(self):
        prof = correlation_profile(template_from_dss(Dss.from_sets(5, [[], []])))
        assert prof.counts.sum() == 0

    def test_matches_difference_profile(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            dss = random_dss(rng)
            assert correlation_profile(template_from_dss(dss)) == difference_profile(dss)


class TestTextFormat:
    def test_small_alphabet_round_trip(self):
        symbols = np.array([0, 1, WILDCARD, 3, WILDCARD])
        text = format_symbols(symbols, 4)
        assert text == "01*3*"
        assert np.array_equal(parse_symbols(text, 4), symbols)

    def test_large_alphabet_round_trip(self):
        symbols = np.array([0, 11, WILDCARD, 13])
        text = format_symbols(symbols, 14)
        assert text == "0,11,*,13"
        assert np.array_equal(parse_symbols(text, 14), symbols)

    def test_symbol_out_of_alphabet(self):
        with pytest.raises(ValueError):
            parse_symbols("05", 4)

    def test_empty(self):
        assert parse_symbols("", 3).size == 0
        assert parse_symbols("\n", 12).size == 0


class TestBlockCodes:
    def test_identity(self):
        code = IdentityCode(5, 3)
        payload = np.array([0, 2, 1, 0, 2])
        block = code.encode(payload)
        assert np.array_equal(block, payload)
        decoded, corrections = code.decode(block)
        assert np.array_equal(decoded, payload) and corrections == 0
        assert (code.k, code.d) == (5, 1)

    def test_repetition_parameters(self):
        code = RepetitionCode(13, 2, repeat=3)
        assert (code.k, code.d, code.block_length) == (4, 3, 13)

    def test_repetition_round_trip_with_fill(self):
        code = RepetitionCode(13, 2, repeat=3)
        block = code.encode([1, 0, 1, 1])
        assert list(block) == [1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0]
        decoded, corrections = code.decode(block)
        assert list(decoded) == [1, 0, 1, 1] and corrections == 0

    def test_repetition_corrects_within_half_distance(self):
        code = RepetitionCode(12, 3, repeat=3)
        payload = np.array([0, 1, 2, 1])
        block = code.encode(payload)
        block[4] = (block[4] + 1) % 3  # one error in group 1
        decoded, corrections = code.decode(block)
        assert np.array_equal(decoded, payload) and corrections == 1

    def test_repetition_majority_tie_fails(self):
        code = RepetitionCode(3, 3, repeat=3)
        with pytest.raises(EccFailure):
            code.decode(np.array([0, 1, 2]))

    def test_payload_length_error(self):
        with pytest.raises(PayloadLengthError):
            RepetitionCode(13, 2, repeat=3).encode([1, 0])

    def test_zero_length_identity(self):
        code = IdentityCode(0, 2)
        assert code.encode([]).size == 0
        assert code.decode(np.array([], dtype=np.int64))[0].size == 0


class TestSyncCode:
    def test_block_length_must_match_slots(self):
        with pytest.raises(LengthMismatch):
            SyncCode.build(paper_dss(), RepetitionCode(12, 2, repeat=3))

    def test_rho_and_tolerance(self):
        code = paper_code()
        assert code.rho == 3
        assert code.tolerance == 1

    def test_json_round_trip(self):
        code = paper_code()
        rebuilt = SyncCode.from_json_dict(code.to_json_dict())
        assert rebuilt.template == code.template
        assert rebuilt.ecc.d == 3 and rebuilt.rho == 3


class TestEncode:
    def test_all_zero_codeword_paper_frame(self):
        # 13 zeros dropped into the 13 wildcard slots of the paper template.
        code = paper_code(IdentityCode(13, 2))
        frame = encode(code, np.zeros(13, dtype=np.int64))
        assert format_symbols(frame, 2) == "0000010001100010010000001"

    def test_round_trip_without_noise(self):
        code = paper_code()
        for value in range(16):
            payload = np.array([(value >> i) & 1 for i in range(4)])
            decoded, corrections = decode_payload(code, encode(code, payload))
            assert np.array_equal(decoded, payload) and corrections == 0

    def test_markers_independent_of_payload(self):
        code = paper_code()
        markers = code.template.marker_positions
        reference = encode(code, [0, 0, 0, 0])[markers]
        rng = np.random.default_rng(12)
        for _ in range(20):
            frame = encode(code, rng.integers(0, 2, size=4))
            assert np.array_equal(frame[markers], reference)

    def test_payload_length_error(self):
        with pytest.raises(PayloadLengthError):
            encode(paper_code(), [0, 1])


class TestDecodePayload:
    def test_corrects_payload_errors(self):
        code = paper_code()
        frame = encode(code, [1, 0, 1, 1])
        slot = code.template.wildcard_positions[0]
        frame[slot] ^= 1
        decoded, corrections = decode_payload(code, frame)
        assert list(decoded) == [1, 0, 1, 1] and corrections == 1

    def test_frame_length_checked(self):
        with pytest.raises(LengthMismatch):
            decode_payload(paper_code(), np.zeros(24, dtype=np.int64))

    def test_tie_raises(self):
        dss = Dss.from_sets(5, [[0], [1]])
        code = SyncCode.build(dss, RepetitionCode(3, 2, repeat=2))
        frame = encode(code, [1])
        frame[list(code.template.wildcard_positions)[0]] ^= 1  # tie in the pair
        with pytest.raises(EccFailure):
            decode_payload(code, frame)


def _window_with_true_offset(code, offset, payloads):
    """A 2n-1 window where a full frame starts at ``offset`` in the window."""
    frames = [encode(code, p) for p in payloads]
    stream = np.concatenate(frames)
    start = code.n - offset
    return stream[start : start + 2 * code.n - 1]


class TestLocateFrame:
    def test_noiseless_every_offset(self):
        code = paper_code()
        payloads = [[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 0]]
        for offset in range(25):
            est = locate_frame(code, _window_with_true_offset(code, offset, payloads))
            assert est.offset == offset
            assert est.marker_mismatches == 0
            assert est.confident

    def test_single_error_anywhere_in_window(self):
        # One substitution anywhere in the 2n-1 window keeps every length-n
        # view within tolerance 1, so the true offset must win.
        code = paper_code()
        payloads = [[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 0]]
        for offset in (0, 7, 24):
            clean = _window_with_true_offset(code, offset, payloads)
            for pos in range(clean.size):
                window = clean.copy()
                window[pos] ^= 1
                est = locate_frame(code, window)
                assert est.offset == offset
                assert est.confident

    def test_minimum_length_window(self):
        code = paper_code()
        frame = encode(code, [0, 1, 0, 1])
        est = locate_frame(code, frame)  # length exactly n: single candidate
        assert est.offset == 0 and est.marker_mismatches == 0

    def test_window_too_short(self):
        with pytest.raises(WindowTooShort):
            locate_frame(paper_code(), np.zeros(24, dtype=np.int64))

    def test_tie_breaks_to_smallest_offset(self):
        code = paper_code()
        window = np.zeros(49, dtype=np.int64)
        scores = []
        markers = code.template.marker_positions
        symbols = code.template.symbols[markers]
        for offset in range(25):
            scores.append(int((window[offset + markers] != symbols).sum()))
        best = min(scores)
        assert locate_frame(code, window).offset == scores.index(best)

    def test_beyond_guarantee_documented(self):
        # ceil(rho/2) = 2 adversarial errors can defeat alignment; just assert
        # the call still returns a well-formed estimate.
        code = paper_code()
        window = _window_with_true_offset(code, 5, [[0] * 4, [1] * 4, [0] * 4])
        window = window.copy()
        m = code.template.marker_positions
        window[5 + m[0]] ^= 1
        window[5 + m[1]] ^= 1
        est = locate_frame(code, window)
        assert 0 <= est.offset < 25


class TestCommaFreeIndex:
    def test_paper_with_repetition_at_least_rho(self):
        value = comma_free_index_bruteforce(paper_code(), max_codewords=16)
        assert value >= 3

    def test_single_codeword_full_template_equals_profile_min(self):
        # With r = n there are no payload slots: the lone codeword is the
        # template, and splices of it with itself are its cyclic shifts.
        dss = Dss.from_sets(7, [[0, 2, 5], [1, 3, 4, 6]])
        code = SyncCode.build(dss, IdentityCode(0, 2))
        prof = difference_profile(dss)
        assert comma_free_index_bruteforce(code) == int(prof.counts[1:].min())

    def test_sentinel_for_n1(self):
        dss = Dss.from_sets(1, [[0], []])
        code = SyncCode.build(dss, IdentityCode(0, 2))
        assert math.isinf(comma_free_index_bruteforce(code))

    def test_too_large_guard(self):
        code = paper_code(IdentityCode(13, 2))
        with pytest.raises(TooLarge):
            comma_free_index_bruteforce(code, max_codewords=512)

    def test_at_least_rho_randomized(self):
        rng = np.random.default_rng(13)
        checked = 0
        while checked < 12:
            dss = random_dss(rng, n_max=12, q_max=3)
            m = dss.n - dss.redundancy
            if dss.redundancy == 0:
                continue
            w = int(rng.integers(1, 4))
            ecc = RepetitionCode(m, dss.q, repeat=w) if m else IdentityCode(0, dss.q)
            code = SyncCode.build(dss, ecc)
            if code.q ** code.ecc.k > 64:
                continue
            rho = difference_profile(dss).index
            value = comma_free_index_bruteforce(code, max_codewords=64)
            if dss.n > 1:
                assert value >= rho
            checked += 1
