#!/usr/bin/env python3
"""Regenerates the image fixtures under tests/data.

natural/   20 grayscale 256x256 photographs (scikit-image sample data,
           public domain / CC0), resized on the short side and center-cropped.
clipart/   5 synthetic flat-palette drawings: clean_N.png plus the same image
           after a JPEG quality-20 round trip (jpeg20_N.png, decoded by Pillow).
hdr/       3 linear-light RGB scenes stored as little-endian PFM.

Outputs are committed; rerun only when the fixture definitions change.
"""
import io
import os

import numpy as np
from PIL import Image
import skimage.data as skd
from skimage.color import rgb2gray
from skimage.transform import resize

HERE = os.path.dirname(os.path.abspath(__file__))


def to_gray(img):
    img = np.asarray(img)
    if img.ndim == 3:
        return rgb2gray(img[..., :3])
    return img.astype(np.float64) / (255.0 if img.dtype == np.uint8 else 1.0)


def square_256(gray, offset=(0.5, 0.5)):
    h, w = gray.shape
    s = 256.0 / min(h, w)
    nh, nw = max(256, round(h * s)), max(256, round(w * s))
    g = resize(gray, (nh, nw), anti_aliasing=True)
    y0 = int((nh - 256) * offset[0])
    x0 = int((nw - 256) * offset[1])
    return g[y0:y0 + 256, x0:x0 + 256]


def save_u8(path, arr):
    u8 = np.clip(np.floor(arr * 255.0 + 0.5), 0, 255).astype(np.uint8)
    Image.fromarray(u8).save(path)
    return u8


def natural():
    out = os.path.join(HERE, "natural")
    os.makedirs(out, exist_ok=True)
    sources = [
        ("astronaut", skd.astronaut(), (0.5, 0.5)),
        ("camera", skd.camera(), (0.5, 0.5)),
        ("coffee", skd.coffee(), (0.5, 0.5)),
        ("chelsea", skd.chelsea(), (0.5, 0.5)),
        ("coins", skd.coins(), (0.5, 0.5)),
        ("moon", skd.moon(), (0.5, 0.5)),
        ("rocket", skd.rocket(), (0.5, 0.5)),
        ("motorcycle", skd.stereo_motorcycle()[0], (0.5, 0.5)),
        ("retina", skd.retina(), (0.5, 0.5)),
        ("hubble", skd.hubble_deep_field(), (0.5, 0.5)),
        ("ihc", skd.immunohistochemistry(), (0.5, 0.5)),
        ("clock", skd.clock(), (0.5, 0.5)),
        ("page", skd.page(), (0.5, 0.5)),
        ("text", skd.text(), (0.5, 0.5)),
        ("brick", skd.brick(), (0.5, 0.5)),
        ("grass", skd.grass(), (0.5, 0.5)),
        ("gravel", skd.gravel(), (0.5, 0.5)),
        ("microaneurysms", skd.microaneurysms(), (0.5, 0.5)),
        ("coffee_left", skd.coffee(), (0.5, 0.0)),
        ("rocket_right", skd.rocket(), (0.5, 1.0)),
    ]
    for i, (name, img, off) in enumerate(sources):
        save_u8(os.path.join(out, f"{i:02d}_{name}.png"), square_256(to_gray(img), off))


PALETTE = np.array([
    [0.95, 0.95, 0.92],
    [0.85, 0.10, 0.10],
    [0.10, 0.30, 0.80],
    [0.10, 0.60, 0.20],
    [0.95, 0.80, 0.10],
    [0.10, 0.10, 0.10],
    [0.60, 0.20, 0.70],
])


def clipart():
    out = os.path.join(HERE, "clipart")
    os.makedirs(out, exist_ok=True)
    rng = np.random.default_rng(7)
    h, w = 192, 256
    yy, xx = np.mgrid[:h, :w]
    for k in range(5):
        img = np.zeros((h, w, 3)) + PALETTE[0]
        for r in range(7):
            col = PALETTE[rng.integers(1, len(PALETTE))]
            cy, cx = rng.integers(20, h - 20), rng.integers(20, w - 20)
            if r % 3 == 0:
                img[(yy - cy) ** 2 + (xx - cx) ** 2 < rng.integers(15, 45) ** 2] = col
            elif r % 3 == 1:
                img[max(cy - 30, 0):cy + rng.integers(10, 40),
                    max(cx - 40, 0):cx + rng.integers(10, 60)] = col
            else:
                img[(np.abs(yy - cy) + np.abs(xx - cx)) < rng.integers(15, 40)] = col
        u8 = save_u8(os.path.join(out, f"clean_{k}.png"), img)
        buf = io.BytesIO()
        Image.fromarray(u8).save(buf, "JPEG", quality=20)
        buf.seek(0)
        Image.open(buf).convert("RGB").save(os.path.join(out, f"jpeg20_{k}.png"))


def write_pfm(path, rgb):
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"PF\n{w} {h}\n-1.0\n".encode("ascii"))
        fh.write(np.ascontiguousarray(rgb[::-1].astype("<f4")).tobytes())


def hdr():
    out = os.path.join(HERE, "hdr")
    os.makedirs(out, exist_ok=True)
    h, w = 128, 160
    yy, xx = np.mgrid[:h, :w].astype(np.float64)

    # Dark room with a bright window and a light source.
    lum = np.full((h, w), 0.02)
    lum[20:70, 90:140] = 40.0
    lum *= 1.0 + 0.1 * np.sin(xx / 3.0) * np.cos(yy / 5.0)
    lum += 500.0 * np.exp(-((yy - 100) ** 2 + (xx - 40) ** 2) / 30.0)
    tint = np.stack([np.full((h, w), 1.0), np.full((h, w), 0.9), np.full((h, w), 0.75)], -1)
    tint[20:70, 90:140] = [0.7, 0.85, 1.0]
    write_pfm(os.path.join(out, "window.pfm"), lum[..., None] * tint)

    # Sky gradient over a textured foreground, about five decades.
    sky = 10.0 ** (3.0 - 2.0 * yy / h)
    ground = 0.05 * (1.0 + 0.5 * np.sin(xx / 2.0 + yy / 7.0) ** 2)
    lum = np.where(yy < 0.6 * h + 6 * np.sin(xx / 15.0), sky, ground)
    rgb = np.stack([lum * 0.8, lum * 0.9, lum * 1.1], -1)
    write_pfm(os.path.join(out, "sky.pfm"), rgb)

    # A natural photograph mapped to four decades of luminance.
    g = square_256(to_gray(skd.chelsea()))[::2, ::2]
    lum = 10.0 ** (4.0 * g - 2.0)
    rgb = np.stack([lum * 1.05, lum, lum * 0.9], -1)
    write_pfm(os.path.join(out, "chelsea.pfm"), rgb)


if __name__ == "__main__":
    natural()
    clipart()
    hdr()
