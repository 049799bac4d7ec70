"""Print the Stern-Gerlach numbers for both placements of the Planck constant."""

import argparse
from pathlib import Path

from qtstar.cli import sg_report
from qtstar.config import load_config
from qtstar.core import REFERENCE_SG_FACTORS, REFERENCE_SG_VALUES

DEFAULT = Path(__file__).resolve().parents[1] / "configs" / "stern_gerlach.toml"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(DEFAULT))
    args = ap.parse_args()
    rep, alt, cfg, alt_cfg = sg_report(load_config(args.config))
    print(f"{'quantity':<24}{'h slot':>14}{'reference':>14}{'rel err':>10}{'hbar slot':>14}")
    refs = {**REFERENCE_SG_VALUES, **REFERENCE_SG_FACTORS}
    for name, value in {**rep.values, **rep.factors}.items():
        ref = refs.get(name)
        err = f"{abs(value - ref) / abs(ref):10.2e}" if ref else " " * 10
        other = alt.values.get(name, alt.factors.get(name))
        print(f"{name:<24}{value:>14.6g}{ref if ref else float('nan'):>14.6g}{err}{other:>14.6g}")
    for name, ok in rep.flags.items():
        print(f"{name:<28}{'yes' if ok else 'no':>6}  (hbar slot: {'yes' if alt.flags[name] else 'no'})")


if __name__ == "__main__":
    main()
