#!/usr/bin/env python3
"""Convert the digit JSON files of the `mnist` npm package into gzipped IDX files.

The npm package ships 10000 MNIST digits as per-class JSON arrays of floats
normalized to [0, 1] with three decimals. Multiplying by 255 and rounding
recovers the original bytes exactly.

    npm pack mnist && tar xzf mnist-*.tgz
    python3 scripts/npm_mnist_to_idx.py package/src/digits data/mnist
"""
import gzip
import json
import struct
import sys
from pathlib import Path

ROWS = COLS = 28


def main(src: Path, dst: Path) -> None:
    per_class = []
    for label in range(10):
        data = json.loads((src / f"{label}.json").read_text())["data"]
        assert len(data) % (ROWS * COLS) == 0
        pixels = bytes(round(v * 255) for v in data)
        per_class.append([pixels[i:i + ROWS * COLS] for i in range(0, len(pixels), ROWS * COLS)])

    # Round-robin over classes so the file is not sorted by label.
    images, labels = [], []
    depth = max(len(c) for c in per_class)
    for i in range(depth):
        for label, items in enumerate(per_class):
            if i < len(items):
                images.append(items[i])
                labels.append(label)

    dst.mkdir(parents=True, exist_ok=True)
    with gzip.GzipFile(dst / "mnist10k-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), ROWS, COLS))
        f.write(b"".join(images))
    with gzip.GzipFile(dst / "mnist10k-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))
    print(f"wrote {len(images)} images to {dst}")


if __name__ == "__main__":
    main(Path(sys.argv[1]), Path(sys.argv[2]))
