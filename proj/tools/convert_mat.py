#!/usr/bin/env python3
"""Convert a MATLAB cube/ground-truth pair to the .hsib/.gt layout.

    convert_mat.py Indian_pines_corrected.mat Indian_pines_gt.mat out/indian_pines
"""
import argparse
import json
from pathlib import Path

import numpy as np
import scipy.io


def only_array(path):
    arrays = {k: v for k, v in scipy.io.loadmat(path).items() if isinstance(v, np.ndarray) and v.ndim >= 2}
    if len(arrays) != 1:
        raise SystemExit(f"{path}: expected one array, found {sorted(arrays)}")
    return next(iter(arrays.values()))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("cube")
    ap.add_argument("gt")
    ap.add_argument("stem", help="output path without extension")
    args = ap.parse_args()

    cube = only_array(args.cube)
    gt = only_array(args.gt)
    if cube.ndim != 3 or gt.shape != cube.shape[:2]:
        raise SystemExit(f"shape mismatch: cube {cube.shape}, gt {gt.shape}")
    h, w, b = cube.shape
    stem = Path(args.stem)
    stem.parent.mkdir(parents=True, exist_ok=True)

    # band-sequential: each band is a row-major H x W plane
    np.ascontiguousarray(cube.transpose(2, 0, 1), dtype="<f4").tofile(f"{stem}.hsib")
    Path(f"{stem}.hsib.json").write_text(
        json.dumps({"height": h, "width": w, "bands": b, "dtype": "f32le", "order": "bsq"}) + "\n")
    np.ascontiguousarray(gt, dtype="<u2").tofile(f"{stem}.gt")
    Path(f"{stem}.gt.json").write_text(json.dumps({"height": h, "width": w}) + "\n")
    print(f"{stem}: {h}x{w}x{b}, {int(gt.max())} classes, {int((gt > 0).sum())} labeled pixels")


if __name__ == "__main__":
    main()
