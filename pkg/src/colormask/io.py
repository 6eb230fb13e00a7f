"""CSV, JSON and 8-bit grayscale PNG writers used by the CLI."""

import csv
import json

import numpy as np
from PIL import Image


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_png(path, image):
    image = np.asarray(image)
    if image.dtype != np.uint8:
        raise TypeError(f"PNG output expects uint8, got {image.dtype}")
    Image.fromarray(image, mode="L").save(path, format="PNG")


def read_png(path):
    with Image.open(path) as im:
        return np.asarray(im.convert("L"))


def log_scaled(power):
    """Map non-negative power to 0..255 on a log1p scale."""
    logp = np.log1p(np.asarray(power, dtype=np.float64))
    top = logp.max()
    if top <= 0:
        return np.zeros(logp.shape, dtype=np.uint8)
    return np.round(255 * logp / top).astype(np.uint8)


def mask_image(mask_row, side):
    """0 (keep) -> black, 1 (remove) -> white."""
    return (np.asarray(mask_row, dtype=np.uint8).reshape(side, side) * 255).astype(np.uint8)


def write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if header:
            w.writerow(header)
        w.writerows(rows)


def write_masks_csv(path, mask):
    """One line per row, ``P`` binary digits."""
    write_rows(path, None, (["".join(map(str, row))] for row in np.asarray(mask, dtype=np.uint8)))


def read_masks_csv(path):
    with open(path, newline="") as fh:
        return np.array([[int(c) for c in row[0]] for row in csv.reader(fh)], dtype=np.uint8)


def write_radial_csv(path, spectrum):
    rows = ((repr(float(r)), repr(float(p))) for r, p in zip(spectrum.radii, spectrum.mean_power))
    write_rows(path, ("radius", "mean_power"), rows)


def read_radial_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        data = np.array([[float(a), float(b)] for a, b in reader])
    return data[:, 0], data[:, 1]


def histogram_image(counts, height=100):
    """Bar chart of ``counts`` as a uint8 image, one column per bin, white bars on black."""
    counts = np.asarray(counts, dtype=np.float64)
    img = np.zeros((height, max(len(counts), 1)), dtype=np.uint8)
    top = counts.max() if len(counts) else 0
    if top <= 0:
        return img
    heights = np.round(height * counts / top).astype(int)
    rows = np.arange(height)[:, None]
    img[rows >= height - heights[None, :]] = 255
    return img
