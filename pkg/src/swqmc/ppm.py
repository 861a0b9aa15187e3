"""PPM image I/O (P6 binary and P3 ASCII, maxval 255)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError


@dataclass(frozen=True)
class RgbImage:
    """8-bit RGB raster stored as an (height, width, 3) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"pixels must be (h, w, 3), got shape {px.shape}")
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255):
                raise ValueError("channel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def flatten_colors(self) -> np.ndarray:
        """(n_pixels, 3) float64 view of the raster, row-major."""
        return self.pixels.reshape(-1, 3).astype(np.float64)


class _Scanner:
    """Tokenizer over PPM header bytes that tracks the byte offset."""

    def __init__(self, data: bytes, path):
        self.data = data
        self.pos = 0
        self.path = path

    def fail(self, message: str):
        raise ParseError(message, path=self.path, offset=self.pos)

    def _skip_separators(self):
        while self.pos < len(self.data):
            c = self.data[self.pos:self.pos + 1]
            if c.isspace():
                self.pos += 1
            elif c == b"#":
                while self.pos < len(self.data) and self.data[self.pos:self.pos + 1] != b"\n":
                    self.pos += 1
            else:
                return

    def token(self) -> bytes:
        self._skip_separators()
        start = self.pos
        while self.pos < len(self.data) and not self.data[self.pos:self.pos + 1].isspace():
            self.pos += 1
        if start == self.pos:
            self.fail("unexpected end of file")
        return self.data[start:self.pos]

    def integer(self, what: str) -> int:
        tok = self.token()
        try:
            return int(tok)
        except ValueError:
            self.fail(f"expected integer {what}, got {tok[:20]!r}")


def read_ppm(path) -> RgbImage:
    """Parse a P6 or P3 PPM file; errors carry the byte offset."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read image: {exc}", path=path) from exc
    scanner = _Scanner(data, path)
    magic = scanner.token()
    if magic not in (b"P6", b"P3"):
        raise ParseError(f"not a PPM file (magic {magic[:8]!r})", path=path, offset=0)
    width = scanner.integer("width")
    height = scanner.integer("height")
    maxval = scanner.integer("maxval")
    if width < 1 or height < 1:
        scanner.fail(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        scanner.fail(f"only maxval 255 is supported, got {maxval}")
    count = width * height * 3

    if magic == b"P6":
        # exactly one whitespace byte separates the header from the raster
        if scanner.pos >= len(data) or not data[scanner.pos:scanner.pos + 1].isspace():
            scanner.fail("missing separator before binary raster")
        start = scanner.pos + 1
        raster = data[start:start + count]
        if len(raster) < count:
            raise ParseError(
                f"truncated raster: expected {count} bytes, got {len(raster)}",
                path=path, offset=start + len(raster),
            )
        pixels = np.frombuffer(raster, dtype=np.uint8, count=count)
    else:
        values = np.empty(count, dtype=np.uint8)
        for i in range(count):
            v = scanner.integer("sample")
            if not 0 <= v <= 255:
                scanner.fail(f"sample {v} outside [0, 255]")
            values[i] = v
        pixels = values
    return RgbImage(pixels.reshape(height, width, 3))


def write_ppm(path, image: RgbImage, ascii_format: bool = False) -> None:
    """Write a PPM file, binary P6 by default or ASCII P3 on request."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"{image.width} {image.height}\n255\n"
    if ascii_format:
        flat = image.pixels.reshape(-1, 3)
        body = "\n".join(" ".join(str(int(v)) for v in px) for px in flat)
        path.write_text("P3\n" + header + body + "\n")
    else:
        path.write_bytes(b"P6\n" + header.encode() + image.pixels.tobytes())
