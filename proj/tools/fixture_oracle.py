#!/usr/bin/env python3
#
# Copyright 2026 The advrisk Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Oracle values for a 1-D linear SVM fixture, by dense grid search.

Usage: fixture_oracle.py MODEL.json DATA.csv EPS[,EPS...] > expected.json
"""

import json
import sys

import numpy as np
from scipy.optimize import minimize_scalar


def load(model_path, data_path):
    with open(model_path) as fh:
        model = json.load(fh)
    if model["kind"] != "linear_svm" or len(model["w"]) != 1:
        sys.exit("only 1-D linear SVM models are supported")
    rows = [l for l in open(data_path) if l.strip() and not l.startswith("#")]
    pts = np.array([[float(c) for c in l.split(",")] for l in rows[1:]])
    return model["w"][0], model["Lambda"], model["r"], pts[:, 0], pts[:, 1]


def main():
    w, lam_cap, r, xs, ys = load(sys.argv[1], sys.argv[2])
    eps_list = [float(e) for e in sys.argv[3].split(",")]
    big_m = 1.0 + lam_cap * r
    grid = np.linspace(-r, r, 20001)
    hinge = {y: np.maximum(0.0, 1.0 - y * w * grid) for y in (-1.0, 1.0)}
    loss = np.maximum(0.0, 1.0 - ys * w * xs)

    def phi(lam):
        out = np.empty(len(xs))
        for i, (x, y) in enumerate(zip(xs, ys)):
            best = loss[i]
            for yp in (-1.0, 1.0):
                v = hinge[yp] - lam * (np.abs(grid - x) + (yp != y))
                best = max(best, v.max())
            out[i] = best
        return out

    def psi(lam):
        return float(np.mean(phi(lam) - loss))

    top = max(abs(w), float(np.max(2 * ys * w * xs))) + 0.5
    lo, hi = 0, int(np.ceil(top / 1e-4))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if psi(mid * 1e-4) <= 1e-6 * big_m:
            hi = mid
        else:
            lo = mid
    lambda_plus = hi * 1e-4

    risks = []
    lgrid = np.arange(0.0, top, 1e-3)
    for eps in eps_list:
        g = lambda l: l * eps + float(np.mean(phi(l)))
        vals = np.array([g(l) for l in lgrid])
        k = int(np.argmin(vals))
        a, b = lgrid[max(k - 1, 0)], lgrid[min(k + 1, len(lgrid) - 1)]
        res = minimize_scalar(g, bounds=(a, b), method="bounded", options={"xatol": 1e-9})
        risks.append({"epsilon": eps, "value": min(float(vals[k]), float(res.fun))})

    json.dump({"lambda_plus": lambda_plus, "risk": risks, "tolerance": 1e-3}, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
