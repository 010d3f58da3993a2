"""Image file I/O: binary PGM/PPM (8-bit, values mapped to [0, 1]) and MCF.

MCF is a raw float container for multi-channel fields: the ASCII header
``MCF1\\n<H> <W> <N>\\n`` followed by 8*H*W*N bytes of little-endian
float64, row-major and channel-interleaved.  MCF round-trips are bit-exact;
PGM/PPM round-trips are exact on the 8-bit lattice k/255.
"""

from __future__ import annotations

import numpy as np

from . import grid

__all__ = ["FormatError", "read_image", "write_image"]

MCF_MAGIC = b"MCF1"


class FormatError(ValueError):
    """Malformed image file; carries the byte offset of the problem."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def _read_pnm_tokens(data, count, start):
    """Read ASCII header tokens, skipping whitespace and # comments."""
    tokens = []
    i = start
    while len(tokens) < count:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i < len(data) and data[i : i + 1] == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
            continue
        j = i
        while j < len(data) and not data[j : j + 1].isspace():
            j += 1
        if j == i:
            raise FormatError("truncated header", offset=i)
        tokens.append(data[i:j])
        i = j
    return tokens, i + 1  # single whitespace byte terminates the header


def _parse_dims(tokens, offset):
    try:
        dims = [int(t) for t in tokens]
    except ValueError:
        raise FormatError("non-numeric header field", offset=offset) from None
    if any(d <= 0 for d in dims):
        raise FormatError("dimensions must be positive", offset=offset)
    return dims


def read_image(path):
    """Read a PGM (P5), PPM (P6) or MCF file into an (H, W, N) array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P5", b"P6"):
        channels = 1 if data[:2] == b"P5" else 3
        tokens, payload_at = _read_pnm_tokens(data, 3, 2)
        w, h, maxval = _parse_dims(tokens, 2)
        if maxval != 255:
            raise FormatError(f"unsupported maxval {maxval}, expected 255", offset=2)
        need = h * w * channels
        payload = data[payload_at : payload_at + need]
        if len(payload) < need:
            raise FormatError(
                f"truncated payload: need {need} bytes, have {len(payload)}",
                offset=payload_at + len(payload),
            )
        raw = np.frombuffer(payload, dtype=np.uint8).reshape(h, w, channels)
        return raw.astype(float) / 255.0
    if data[:4] == MCF_MAGIC:
        if data[4:5] != b"\n":
            raise FormatError("bad magic line", offset=4)
        end = data.find(b"\n", 5)
        if end < 0:
            raise FormatError("truncated header", offset=5)
        fields = data[5:end].split()
        if len(fields) != 3:
            raise FormatError("header needs '<H> <W> <N>'", offset=5)
        h, w, n = _parse_dims(fields, 5)
        need = 8 * h * w * n
        payload = data[end + 1 : end + 1 + need]
        if len(payload) < need:
            raise FormatError(
                f"truncated payload: need {need} bytes, have {len(payload)}",
                offset=end + 1 + len(payload),
            )
        return np.frombuffer(payload, dtype="<f8").reshape(h, w, n).copy()
    raise FormatError(f"bad magic {data[:4]!r}", offset=0)


def write_image(path, u):
    """Write an image; the extension picks the format (.pgm/.ppm else MCF).

    PGM/PPM clip to [0, 1] and quantize to the 8-bit lattice.
    """
    u = grid.as_image(u)
    h, w, n = u.shape
    name = str(path).lower()
    if name.endswith(".pgm") or name.endswith(".ppm"):
        want = 1 if name.endswith(".pgm") else 3
        if n != want:
            raise ValueError(f"{name[-4:]} needs {want} channels, image has {n}")
        magic = b"P5" if want == 1 else b"P6"
        raw = np.clip(np.rint(u * 255.0), 0, 255).astype(np.uint8)
        with open(path, "wb") as fh:
            fh.write(magic + b"\n%d %d\n255\n" % (w, h))
            fh.write(raw.tobytes())
        return
    with open(path, "wb") as fh:
        fh.write(MCF_MAGIC + b"\n%d %d %d\n" % (h, w, n))
        fh.write(np.ascontiguousarray(u, dtype="<f8").tobytes())
