"""Phase detection sequences built from a self-synchronizing code.

Concatenating the M codewords of a self-synchronizing code of length n,
comma-free index rho, and payload distance d yields a periodic sequence of
length N = n M whose length-(2n-1) windows form a code of minimum distance
d' >= min(rho, d): every such window contains one complete codeword.  Frame i
carries its own number as payload (base-q digits, little-endian, zero-padded),
so one noisy window pins down the absolute phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codec import SyncCode, decode_payload, encode, locate_frame
from .errors import (
    CapacityError,
    DecodeFailure,
    EccFailure,
    TooLarge,
    WindowLengthError,
)

_BRUTE_FORCE_CAP = 10_000


@dataclass(frozen=True)
class PhaseEstimate:
    """Decoded phase of a window, referenced to the window's last symbol.

    ``phase`` = frame_number * frame_length + offset_in_frame, where
    frame_number indexes the frame containing that last symbol.
    """

    phase: int
    frame_number: int
    offset_in_frame: int
    marker_mismatches: int
    ecc_corrections: int

    def to_json_dict(self) -> dict:
        return {
            "phase": self.phase,
            "frame_number": self.frame_number,
            "offset_in_frame": self.offset_in_frame,
            "marker_mismatches": self.marker_mismatches,
            "ecc_corrections": self.ecc_corrections,
        }


class Pds:
    """Periodic sequence of M frames, each a codeword of the generator code."""

    def __init__(self, code: SyncCode, frame_count: int, sequence: np.ndarray):
        self.code = code
        self.frame_length = code.n
        self.frame_count = frame_count
        self.sequence = sequence
        self.window_size = 2 * code.n - 1
        d = code.ecc.d
        self.claimed_min_distance = min(code.rho, d)

    @property
    def length(self) -> int:
        return self.frame_length * self.frame_count

    @property
    def tolerance(self) -> int:
        """Substitutions per window the phase guarantee covers."""
        return (int(self.claimed_min_distance) - 1) // 2

    def window_at(self, start: int) -> np.ndarray:
        """The cyclic window of window_size symbols starting at ``start``."""
        idx = (start + np.arange(self.window_size)) % self.length
        return self.sequence[idx]

    def to_json_dict(self) -> dict:
        return {"code": self.code.to_json_dict(), "frames": self.frame_count}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Pds":
        code = SyncCode.from_json_dict(obj["code"])
        return build_pds(code, int(obj["frames"]))


def frame_payload(code: SyncCode, frame_number: int) -> np.ndarray:
    """Base-q digits of ``frame_number``, little-endian, zero-padded to k."""
    digits = np.zeros(code.ecc.k, dtype=np.int64)
    x = frame_number
    for i in range(code.ecc.k):
        x, digits[i] = divmod(x, code.q)
    return digits


def payload_to_frame_number(payload: np.ndarray, q: int) -> int:
    value = 0
    for digit in reversed(np.asarray(payload, dtype=np.int64)):
        value = value * q + int(digit)
    return value


def build_pds(code: SyncCode, frame_count: int) -> Pds:
    """Concatenate frames 0..M-1, frame i encoding its own number as payload."""
    if frame_count < 1:
        raise CapacityError(f"frame_count must be >= 1, got {frame_count}")
    capacity = code.q ** code.ecc.k
    if frame_count > capacity:
        raise CapacityError(
            f"{frame_count} frames exceed payload capacity {capacity}"
        )
    frames = [encode(code, frame_payload(code, i)) for i in range(frame_count)]
    return Pds(code, frame_count, np.concatenate(frames))


def verify_pds_bruteforce(pds: Pds) -> int:
    """Exact minimum pairwise Hamming distance over all N cyclic windows.

    Guarded at N <= 10^4; the claimed distance min(rho, d) is a lower bound
    on the result.
    """
    N = pds.length
    if N > _BRUTE_FORCE_CAP:
        raise TooLarge(f"{N} windows exceed the brute-force cap {_BRUTE_FORCE_CAP}")
    k = pds.window_size
    # Windows may wrap several times when k - 1 >= N (tiny frame counts).
    copies = 1 + -(-(k - 1) // N)
    extended = np.tile(pds.sequence, copies)[: N + k - 1]
    windows = np.lib.stride_tricks.sliding_window_view(extended, k)[:N]
    best = k + 1
    chunk = max(1, 4_000_000 // k)
    for i in range(N - 1):
        for j in range(i + 1, N, chunk):
            dists = (windows[j : j + chunk] != windows[i]).sum(axis=1)
            best = min(best, int(dists.min()))
    return best


def locate_phase(pds: Pds, window) -> PhaseEstimate:
    """Decode the phase of one length-(2n-1) window.

    Finds the frame boundary, decodes the complete frame's payload into its
    frame number f, and references the phase to the window's last symbol:
    phase = (f n - offset + 2n - 2) mod N.  Raises DecodeFailure with reason
    'alignment' (non-confident boundary) or 'ecc' (payload undecodable or
    frame number out of range).
    """
    window = np.asarray(window, dtype=np.int64)
    if window.size != pds.window_size:
        raise WindowLengthError(
            f"window must have exactly {pds.window_size} symbols, got {window.size}"
        )
    n = pds.frame_length
    estimate = locate_frame(pds.code, window)
    if not estimate.confident:
        raise DecodeFailure(
            "alignment",
            f"no confident frame boundary "
            f"(best offset {estimate.offset} has "
            f"{estimate.marker_mismatches} marker mismatches)",
        )
    frame = window[estimate.offset : estimate.offset + n]
    try:
        payload, corrections = decode_payload(pds.code, frame)
    except EccFailure as exc:
        raise DecodeFailure("ecc", str(exc)) from exc
    f = payload_to_frame_number(payload, pds.code.q)
    if f >= pds.frame_count:
        raise DecodeFailure("ecc", f"decoded frame number {f} out of range")
    phase = (f * n - estimate.offset + pds.window_size - 1) % pds.length
    return PhaseEstimate(
        phase=phase,
        frame_number=phase // n,
        offset_in_frame=phase % n,
        marker_mismatches=estimate.marker_mismatches,
        ecc_corrections=corrections,
    )
