#!/usr/bin/env python3
"""Regenerates the small image fixtures used by the CLI tests."""

import json
import pathlib

import numpy as np
from PIL import Image

HERE = pathlib.Path(__file__).resolve().parent
LUMA = np.array([0.299, 0.587, 0.114])


def blur(a, r):
    k = np.ones(2 * r + 1) / (2 * r + 1)
    a = np.apply_along_axis(lambda v: np.convolve(np.pad(v, r, mode="wrap"), k, "valid"), 0, a)
    return np.apply_along_axis(lambda v: np.convolve(np.pad(v, r, mode="wrap"), k, "valid"), 1, a)


def texture(rng, size):
    yy, xx = np.mgrid[0:size, 0:size].astype(float)
    t = np.zeros((size, size))
    for _ in range(5):
        fx, fy = rng.uniform(-0.5, 0.5, 2)
        t += rng.uniform(0.3, 1.0) * np.sin(fx * xx + fy * yy + rng.uniform(0, 2 * np.pi))
    t += 1.5 * blur(rng.normal(size=(size, size)), 1)
    return (t - t.min()) / (t.max() - t.min())


def ldr_scene(rng, size, mean=116.0, std=64.0):
    base = texture(rng, size)
    tint = rng.uniform(0.85, 1.15, 3)
    rgb = base[..., None] * tint
    lum = rgb @ LUMA
    rgb = (rgb - lum.mean()) / lum.std() * std + mean
    return np.clip(np.rint(rgb), 0, 255).astype(np.uint8)


def write_pfm(path, rgb):
    h, w, _ = rgb.shape
    with open(path, "wb") as f:
        f.write(f"PF\n{w} {h}\n-1.0\n".encode())
        f.write(np.ascontiguousarray(rgb[::-1].astype("<f4")).tobytes())


def write_flat_hdr(path, rgb):
    h, w, _ = rgb.shape
    peak = rgb.max(axis=2)
    mant, exp = np.frexp(peak)
    out = np.zeros((h, w, 4), np.uint8)
    ok = peak > 1e-32
    scale = np.where(ok, np.ldexp(1.0, 8 - exp), 0.0)
    out[..., :3] = np.clip(np.floor(rgb * scale[..., None]), 0, 255)
    out[..., 3] = np.where(ok, exp + 128, 0)
    with open(path, "wb") as f:
        f.write(f"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y {h} +X {w}\n".encode())
        f.write(out.tobytes())


def hdr_scene(rng, size):
    t = texture(rng, size)
    yy, xx = np.mgrid[0:size, 0:size].astype(float)
    cx, cy = rng.uniform(0.2, 0.8, 2) * size
    light = 500.0 * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * (0.08 * size) ** 2))
    lum = 0.05 + 10.0 ** (2.5 * t) + light
    tint = rng.uniform(0.8, 1.2, 3)
    return lum[..., None] * tint


def tone_map(hdr, kind):
    lum = hdr @ LUMA
    if kind == "log":
        ld = np.log1p(lum) / np.log1p(lum.max())
    elif kind == "gamma":
        ld = (lum / lum.max()) ** (1 / 2.2)
    else:
        ld = np.minimum(1.0, lum / np.percentile(lum, 60))
    rgb = hdr / lum[..., None] * ld[..., None]
    return np.clip(np.rint(255 * rgb), 0, 255).astype(np.uint8)


def main():
    rng = np.random.default_rng(20240601)
    ldr = ldr_scene(rng, 64)
    Image.fromarray(ldr).save(HERE / "pair_ldr.png")
    write_pfm(HERE / "pair_hdr.pfm", ldr.astype(np.float64) + 0.5)

    sets = []
    for set_id in (1, 2):
        hdr = hdr_scene(rng, 64)
        write_flat_hdr(HERE / f"set{set_id}.hdr", hdr)
        entries = []
        for score, kind in zip((1.5, 4.0, 6.5), ("log", "gamma", "clip")):
            name = f"set{set_id}_{kind}.png"
            Image.fromarray(tone_map(hdr, kind)).save(HERE / name)
            entries.append({"path": name, "subjective_score": score})
        sets.append({"set_id": set_id, "hdr_path": f"set{set_id}.hdr", "ldr_entries": entries})
    (HERE / "manifest.json").write_text(json.dumps({"sets": sets}, indent=2) + "\n")

    bad = {"sets": [{"set_id": 1, "hdr_path": "set1.hdr", "ldr_entries": [{"path": "set1_log.png", "subjective_score": 2}]}]}
    (HERE / "manifest_one_entry.json").write_text(json.dumps(bad, indent=2) + "\n")


if __name__ == "__main__":
    main()
