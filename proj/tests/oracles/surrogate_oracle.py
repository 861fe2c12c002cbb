"""Independent recomputation of FPR at 95% TPR for the multi-modal surrogate.

Reads CSV feature dumps and monitor JSON files written by the `bam` CLI and
recomputes box distances, Mahalanobis scores, and thresholds with numpy and a
brute-force sweep. Used to derive the values frozen in the acceptance suite.

usage: surrogate_oracle.py BAM_BINARY WORKDIR [train_points] [density ...]
"""
import json
import subprocess
import sys
from pathlib import Path

import numpy as np


def run(*args):
    subprocess.run([str(a) for a in args], check=True, stdout=subprocess.DEVNULL)


def load_csv(path):
    rows = [l for l in Path(path).read_text().splitlines() if l and not l.startswith("#")]
    return np.array([[float(x) for x in r.split(",")[3:]] for r in rows[1:]])


def box_distance(points, monitor_path):
    doc = json.loads(Path(monitor_path).read_text())
    boxes = doc["classes"][0]["boxes"]
    lo = np.array([b["lower"] for b in boxes])
    hi = np.array([b["upper"] for b in boxes])
    out = []
    for z in points:
        per_box = (np.maximum(lo - z, 0) + np.maximum(z - hi, 0)).sum(axis=1)
        out.append(per_box.min())
    return np.array(out)


def mahalanobis(points, train, lam=1e-6):
    mu = train.mean(axis=0)
    cov = np.cov(train, rowvar=False) + lam * np.eye(train.shape[1])
    inv = np.linalg.inv(cov)
    d = points - mu
    return np.sqrt(np.einsum("ij,jk,ik->i", d, inv, d))


def fpr95(id_d, ood_d, target=0.95):
    best = None
    for tau in list(id_d) + [0.0]:
        if np.mean(id_d <= tau) >= target and (best is None or tau < best):
            best = tau
    return int(np.sum(ood_d <= best)), len(ood_d)


def main():
    bam, work = Path(sys.argv[1]), Path(sys.argv[2])
    n_train = int(sys.argv[3]) if len(sys.argv) > 3 else 300
    densities = [float(x) for x in sys.argv[4:]] or [100.0]
    work.mkdir(parents=True, exist_ok=True)
    common = ["--dim", "2", "--components", "3", "--groups", "1", "--separation", "10"]
    for seed in range(1, 11):
        tr, te, od = work / "train.csv", work / "id.csv", work / "ood.csv"
        run(bam, "synth", "--preset", "gauss-mix", "--n", n_train, "--seed", seed, "--csv", tr, *common)
        run(bam, "synth", "--preset", "gauss-mix", "--n", 300, "--seed", seed + 1000, "--csv", te, *common)
        run(bam, "synth", "--preset", "uniform-ood", "--n", 300, "--seed", seed + 2000, "--csv", od, *common)
        train, id_pts, ood_pts = load_csv(tr), load_csv(te), load_csv(od)
        row = [seed]
        for rho in densities:
            m = work / "m.json"
            run(bam, "build", "--features", tr, "--out", m, "--density", rho, "--seed", seed)
            row.append(fpr95(box_distance(id_pts, m), box_distance(ood_pts, m))[0])
        m1 = work / "m1.json"
        run(bam, "build", "--features", tr, "--out", m1, "--cap", 1, "--seed", seed)
        row.append(fpr95(box_distance(id_pts, m1), box_distance(ood_pts, m1))[0])
        row.append(fpr95(mahalanobis(id_pts, train), mahalanobis(ood_pts, train))[0])
        print(" ".join(str(x) for x in row))


if __name__ == "__main__":
    main()
