import numpy as np
import pytest

from dsskit import (
    CapacityError,
    DecodeFailure,
    IdentityCode,
    Pds,
    RepetitionCode,
    Seed,
    SyncCode,
    TooLarge,
    WindowLengthError,
    build_pds,
    corrupt,
    NoiseSpec,
    decode_payload,
    frame_payload,
    locate_frame,
    locate_phase,
    payload_to_frame_number,
    verify_pds_bruteforce,
)
from helpers import paper_dss


@pytest.fixture(scope="module")
def paper_pds():
    code = SyncCode.build(paper_dss(), RepetitionCode(13, 2, repeat=3))
    return build_pds(code, 16)


class TestBuild:
    def test_flagship_shape(self, paper_pds):
        assert paper_pds.length == 400
        assert paper_pds.window_size == 49
        assert paper_pds.claimed_min_distance == 3
        assert paper_pds.tolerance == 1

    def test_every_frame_is_its_own_number(self, paper_pds):
        code = paper_pds.code
        for i in range(16):
            frame = paper_pds.sequence[i * 25 : (i + 1) * 25]
            payload, corrections = decode_payload(code, frame)
            assert corrections == 0
            assert payload_to_frame_number(payload, 2) == i

    def test_frame_payload_digits(self):
        code = SyncCode.build(paper_dss(), RepetitionCode(13, 2, repeat=3))
        assert list(frame_payload(code, 0)) == [0, 0, 0, 0]
        assert list(frame_payload(code, 13)) == [1, 0, 1, 1]  # little-endian
        assert payload_to_frame_number(frame_payload(code, 13), 2) == 13

    def test_capacity_boundary(self):
        code = SyncCode.build(paper_dss(), RepetitionCode(13, 2, repeat=3))
        assert build_pds(code, 16).frame_count == 16  # exactly q^k
        with pytest.raises(CapacityError):
            build_pds(code, 17)

    def test_single_frame(self):
        code = SyncCode.build(paper_dss(), RepetitionCode(13, 2, repeat=3))
        pds = build_pds(code, 1)
        assert np.array_equal(pds.sequence, pds.sequence[:25])
        assert pds.length == 25

    def test_json_round_trip(self, paper_pds):
        rebuilt = Pds.from_json_dict(paper_pds.to_json_dict())
        assert np.array_equal(rebuilt.sequence, paper_pds.sequence)
        assert rebuilt.frame_count == 16


class TestBruteForceDistance:
    def test_flagship_at_least_claimed(self, paper_pds):
        assert verify_pds_bruteforce(paper_pds) >= 3

    def test_single_frame_identity_oracle(self):
        code = SyncCode.build(paper_dss(), IdentityCode(13, 2))
        pds = build_pds(code, 1)
        # Direct enumeration over the n cyclic windows of the one-frame stream.
        k, N = pds.window_size, pds.length
        windows = [pds.sequence[(i + np.arange(k)) % N] for i in range(N)]
        best = min(
            int((windows[i] != windows[j]).sum())
            for i in range(N)
            for j in range(i + 1, N)
        )
        assert verify_pds_bruteforce(pds) == best

    def test_distance_positive(self, paper_pds):
        assert verify_pds_bruteforce(paper_pds) > 0

    def test_guard(self):
        code = SyncCode.build(paper_dss(), IdentityCode(13, 2))
        pds = build_pds(code, 8192)
        with pytest.raises(TooLarge):
            verify_pds_bruteforce(pds)


class TestLocatePhase:
    def test_noiseless_sampled_phases(self, paper_pds):
        for start in range(0, 400, 7):
            est = locate_phase(paper_pds, paper_pds.window_at(start))
            assert est.phase == (start + 48) % 400
            assert est.marker_mismatches == 0
            assert est.ecc_corrections == 0
            assert est.phase == est.frame_number * 25 + est.offset_in_frame

    def test_slide_by_one_increments_phase(self, paper_pds):
        phases = [
            locate_phase(paper_pds, paper_pds.window_at(s)).phase for s in range(60)
        ]
        for a, b in zip(phases, phases[1:]):
            assert b == (a + 1) % 400

    def test_single_error_sampled(self, paper_pds):
        spec_positions = range(0, 49, 5)
        for start in range(0, 400, 31):
            clean = paper_pds.window_at(start)
            for pos in spec_positions:
                window = clean.copy()
                window[pos] ^= 1
                est = locate_phase(paper_pds, window)
                assert est.phase == (start + 48) % 400

    def test_wrong_window_length(self, paper_pds):
        with pytest.raises(WindowLengthError):
            locate_phase(paper_pds, np.zeros(48, dtype=np.int64))
        with pytest.raises(WindowLengthError):
            locate_phase(paper_pds, np.zeros(50, dtype=np.int64))

    def test_alignment_failure_reported(self, paper_pds):
        window = paper_pds.window_at(3)
        noisy, _ = corrupt(
            window, NoiseSpec("iid_rate", Seed(1000), rate=0.5), q=2
        )
        try:
            est = locate_phase(paper_pds, noisy)
            assert 0 <= est.phase < 400  # heavy noise may still decode somewhere
        except DecodeFailure as exc:
            assert exc.reason in ("alignment", "ecc")

    def test_ecc_failure_distinct_from_alignment(self):
        # Even repetition factor makes payload ties possible while the
        # markers stay clean: the failure must be reported as 'ecc'.
        code = SyncCode.build(paper_dss(), RepetitionCode(13, 2, repeat=2))
        pds = build_pds(code, 4)
        window = pds.window_at(1).copy()
        offset = locate_frame(pds.code, window).offset
        pair_pos = offset + int(code.template.wildcard_positions[0])
        window[pair_pos] ^= 1  # breaks one repetition pair into a tie
        with pytest.raises(DecodeFailure) as exc:
            locate_phase(pds, window)
        assert exc.value.reason == "ecc"
