"""PGM read/write, coefficient dumps, and composite visualization planes.

PGM: binary P5 or ASCII P2, maxval <= 255.  Written samples are rounded
half away from zero and clamped to [0, 255]; reading returns float64.

Coefficient dump: one ASCII header line
    rectwave-coeffs v1 <transform> <bank> <rows> <cols> <J|Jx,Jy> <boundary>
followed by every coefficient in canonical stream order as little-endian
64-bit IEEE floats, so dump -> load round-trips bit exactly.

Composite planes place each subband in the standard layout (square:
nested quadrants with low-pass top-left, high-x top-right, high-y bottom
left; rect: the packed-plane positions) with per-subband log scaling
v -> 255*log(1+|v|)/log(1+vmax).
"""

import numpy as np

from . import transform2d
from .errors import CoeffDumpError, PgmError
from .transform2d import RectGrid, SquarePyramid

DUMP_MAGIC = "rectwave-coeffs"
DUMP_VERSION = "v1"


def _read_header_tokens(data, count):
    """PGM header tokenizer: whitespace separated, # comments to EOL."""
    tokens = []
    i = 0
    while len(tokens) < count:
        if i >= len(data):
            raise PgmError("truncated PGM header")
        ch = data[i:i + 1]
        if ch == b"#":
            j = data.find(b"\n", i)
            i = len(data) if j < 0 else j + 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    return tokens, i


def read_pgm(data):
    """Decode P5/P2 bytes into a float64 image array."""
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise PgmError("expected bytes")
    data = bytes(data)
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmError(f"bad magic {magic!r}; expected P5 or P2")
    tokens, pos = _read_header_tokens(data, 4)
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError:
        raise PgmError("non-numeric PGM header field") from None
    if width < 1 or height < 1:
        raise PgmError("non-positive PGM dimensions")
    if maxval > 255:
        raise PgmError(f"maxval {maxval} > 255 is not supported")
    if maxval < 1:
        raise PgmError("maxval must be positive")
    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte after maxval, then raw pixels
        if not data[pos:pos + 1].isspace():
            raise PgmError("missing whitespace after maxval")
        payload = data[pos + 1:]
        if len(payload) < count:
            raise PgmError(f"truncated P5 payload: {len(payload)} of {count} bytes")
        pixels = np.frombuffer(payload[:count], dtype=np.uint8)
    else:
        fields = data[pos:].split()
        if len(fields) < count:
            raise PgmError(f"truncated P2 payload: {len(fields)} of {count} samples")
        try:
            pixels = np.array([int(v) for v in fields[:count]], dtype=np.int64)
        except ValueError:
            raise PgmError("non-numeric P2 sample") from None
    if pixels.max(initial=0) > maxval or pixels.min(initial=0) < 0:
        raise PgmError("sample outside [0, maxval]")
    return pixels.reshape(height, width).astype(np.float64)


def write_pgm(img):
    """Encode an image as binary P5; rounds half away from zero, clamps to [0, 255]."""
    img = transform2d.as_image(img)
    rows, cols = img.shape
    quantized = np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)
    header = f"P5\n{cols} {rows}\n255\n".encode("ascii")
    return header + quantized.tobytes()


def load_pgm(path):
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path, img):
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))


def dump_coeffs(container):
    """Serialize a coefficient container; bit-exact round trip via load_coeffs."""
    if isinstance(container, RectGrid):
        rows, cols = container.plane.shape
        tag, jfield = "rect", f"{container.jx},{container.jy}"
    elif isinstance(container, SquarePyramid):
        rows, cols = container.shape
        tag, jfield = "square", str(container.levels)
    else:
        raise CoeffDumpError(f"not a coefficient container: {type(container).__name__}")
    header = (f"{DUMP_MAGIC} {DUMP_VERSION} {tag} {container.bank} "
              f"{rows} {cols} {jfield} {container.boundary}\n")
    payload = transform2d.stream_values(container).astype("<f8").tobytes()
    return header.encode("ascii") + payload


def _empty_container(tag, bank, rows, cols, jfield, boundary):
    if tag == "rect":
        try:
            jx, jy = (int(v) for v in jfield.split(","))
        except ValueError:
            raise CoeffDumpError(f"bad rect level field {jfield!r}") from None
        return RectGrid(np.zeros((rows, cols)), jx, jy, boundary, bank)
    levels = int(jfield)
    ll = np.zeros((rows >> levels, cols >> levels))
    bands = [tuple(np.zeros((rows >> (levels - k), cols >> (levels - k)))
                   for _ in range(3)) for k in range(levels)]
    return SquarePyramid(ll, bands, boundary, bank)


def load_coeffs(data, expected_transform=None):
    """Parse a coefficient dump back into its container."""
    nl = data.find(b"\n")
    if nl < 0:
        raise CoeffDumpError("missing dump header line")
    try:
        fields = data[:nl].decode("ascii").split()
    except UnicodeDecodeError:
        raise CoeffDumpError("undecodable dump header") from None
    if len(fields) != 8 or fields[0] != DUMP_MAGIC or fields[1] != DUMP_VERSION:
        raise CoeffDumpError("bad dump header")
    _, _, tag, bank, rows, cols, jfield, boundary = fields
    if tag not in ("rect", "square"):
        raise CoeffDumpError(f"unknown transform tag {tag!r}")
    if expected_transform is not None and tag != expected_transform:
        raise CoeffDumpError(f"dump holds a {tag} transform, expected {expected_transform}")
    try:
        rows, cols = int(rows), int(cols)
    except ValueError:
        raise CoeffDumpError("non-numeric dump dimensions") from None
    payload = data[nl + 1:]
    if len(payload) != 8 * rows * cols:
        raise CoeffDumpError(f"payload is {len(payload)} bytes, expected {8 * rows * cols}")
    container = _empty_container(tag, bank, rows, cols, jfield, boundary)
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    transform2d.set_stream_values(container, values)
    return container


def _log_scale(block):
    vmax = np.max(np.abs(block))
    if vmax == 0:
        return np.zeros_like(block)
    return 255.0 * np.log1p(np.abs(block)) / np.log1p(vmax)


def render_composite(container):
    """Single-plane visualization with per-subband log scaling."""
    if isinstance(container, RectGrid):
        rows, cols = container.plane.shape
        out = np.zeros((rows, cols))
        xsegs = transform2d.axis_segments(cols, container.jx)
        ysegs = transform2d.axis_segments(rows, container.jy)
        for _, xs, xe in xsegs:
            for _, ys, ye in ysegs:
                out[ys:ye, xs:xe] = _log_scale(container.plane[ys:ye, xs:xe])
        return out
    if isinstance(container, SquarePyramid):
        rows, cols = container.shape
        out = np.zeros((rows, cols))
        out[:container.ll.shape[0], :container.ll.shape[1]] = _log_scale(container.ll)
        for lh, hl, hh in container.bands:
            r, c = lh.shape
            out[:r, c:2 * c] = _log_scale(hl)   # high-x: top right
            out[r:2 * r, :c] = _log_scale(lh)   # high-y: bottom left
            out[r:2 * r, c:2 * c] = _log_scale(hh)
        return out
    raise CoeffDumpError(f"not a coefficient container: {type(container).__name__}")
