#!/usr/bin/env python3
"""Writes golden_rle.hdr and golden_flat.hdr: the same RGBE pixels, two scanline encodings."""

import pathlib

WIDTH, HEIGHT = 24, 5


def pixel(x, y):
    if x < 10:
        return (200, 100, 50, 128 + y)
    return ((37 * x + 11 * y) % 256, (x * x + y) % 256, 255 - x, 120 + (x % 5) + y)


def rle_component(values):
    out = bytearray()
    i = 0
    literal = []

    def flush():
        while literal:
            chunk = literal[:128]
            del literal[:128]
            out.append(len(chunk))
            out.extend(chunk)

    while i < len(values):
        j = i
        while j < len(values) and values[j] == values[i] and j - i < 127:
            j += 1
        if j - i >= 3:
            flush()
            out.append(128 + (j - i))
            out.append(values[i])
            i = j
        else:
            literal.append(values[i])
            i += 1
    flush()
    return bytes(out)


def header():
    return (
        b"#?RADIANCE\n# golden fixture\nFORMAT=32-bit_rle_rgbe\nEXPOSURE=1.0\n\n"
        + f"-Y {HEIGHT} +X {WIDTH}\n".encode()
    )


def main():
    here = pathlib.Path(__file__).resolve().parent
    flat = bytearray(header())
    rle = bytearray(header())
    for y in range(HEIGHT):
        row = [pixel(x, y) for x in range(WIDTH)]
        for p in row:
            flat.extend(p)
        rle.extend(bytes([2, 2, WIDTH >> 8, WIDTH & 0xFF]))
        for c in range(4):
            rle.extend(rle_component([p[c] for p in row]))
    (here / "golden_flat.hdr").write_bytes(bytes(flat))
    (here / "golden_rle.hdr").write_bytes(bytes(rle))


if __name__ == "__main__":
    main()
