#!/usr/bin/env python3
"""Produce and re-verify a pole certificate for the development series.

Bisects the sign change of the boundary pairing d on (5/2, 3) down to
the requested width, prints the certified bracket, then replays the
certificate from its serialized form as an independent check.
"""

import argparse
import json
import time
from fractions import Fraction

from disksig.polefinder import PoleCertificate, locate_pole


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--width", default="1/1000000",
                    help="target bracket width as a rational (default 1e-6)")
    ap.add_argument("--precision", type=int, default=128)
    args = ap.parse_args()

    width = Fraction(args.width)
    t0 = time.perf_counter()
    cert = locate_pole(width, precision=args.precision)
    elapsed = time.perf_counter() - t0

    print(f"bracket  [{cert.bracket_lo}, {cert.bracket_hi}]")
    print(f"width    {float(cert.bracket_hi - cert.bracket_lo):.3e}")
    print(f"midpoint {float((cert.bracket_lo + cert.bracket_hi) / 2):.12f}")
    print(f"time     {elapsed:.2f}s")

    blob = json.dumps(cert.to_json())
    failures = PoleCertificate.from_json(json.loads(blob)).verify()
    if failures:
        print("re-verification FAILED:")
        for f in failures:
            print(f"  {f}")
        return 1
    print("re-verification from serialized certificate: all checks pass")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
