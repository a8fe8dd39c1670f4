#!/usr/bin/env python3
"""Produce the golden regression artifacts under tests/golden/.

Run once; outputs are committed and the test suite pins them:
  - min_pp_n6.trn / min_pp_n6.json : exhaustive minimum of pp at n=6, k=2,
    with the first minimizing tournament in orientation-code order.
  - regression_constants.json      : small exact values frozen after their
    first computation (rotational quadratic-residue instance, n=3 baseline).
"""

import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ppath.exact import longest_power_path_exact
from ppath.search import enumerate_min_pp
from ppath.tournament import rotational
from ppath.trn import save_trn

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    mn3, _, cnt3 = enumerate_min_pp(3, 2)
    mn6, wit6, cnt6 = enumerate_min_pp(6, 2)
    save_trn(wit6, GOLDEN / "min_pp_n6.trn")
    (GOLDEN / "min_pp_n6.json").write_text(
        json.dumps(
            {"n": 6, "k": 2, "min_pp": mn6, "count": cnt6,
             "witness_file": "min_pp_n6.trn"},
            indent=1, sort_keys=True,
        )
        + "\n"
    )
    qr7 = rotational(7, {1, 2, 4})
    res = longest_power_path_exact(qr7, 2)
    assert res.optimal
    (GOLDEN / "regression_constants.json").write_text(
        json.dumps(
            {
                "min_pp_n3_k2": mn3,
                "min_pp_n3_count": cnt3,
                "pp_rotational7_qr": len(res.path),
                "pp_rotational7_qr_witness": list(res.path.vertices),
            },
            indent=1, sort_keys=True,
        )
        + "\n"
    )
    print(f"n=3 min {mn3} (count {cnt3}); n=6 min {mn6} (count {cnt6}); "
          f"qr7 pp {len(res.path)}; {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
