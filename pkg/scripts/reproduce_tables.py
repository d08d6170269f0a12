"""Print the population coefficient tables for both bivariate normal scenarios."""
import argparse

from popkda.population import fit_homogeneous, fit_inhomogeneous
from popkda.scenarios import scenario


def table(sid: int) -> str:
    models = [(f"f{d}", fit_homogeneous(scenario(sid), d)) for d in range(1, 5)]
    models += [(f"f~{d}", fit_inhomogeneous(scenario(sid), d)) for d in range(1, 5)]
    terms = models[-1][1].basis.labels()
    lines = [f"{'term':>10}" + "".join(f"{name:>9}" for name, _ in models)]
    for term in terms:
        cells = []
        for _, m in models:
            c = m.coefficients().get(term)
            cells.append(f"{c:9.4f}" if c is not None else f"{'-':>9}")
        lines.append(f"{term:>10}" + "".join(cells))
    lines.append(f"{'lambda':>10}" + "".join(f"{m.lam:9.4f}" for _, m in models))
    return "\n".join(lines)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenario", type=int, choices=(1, 2), nargs="*", default=[1, 2])
    for sid in ap.parse_args().scenario:
        print(f"scenario {sid} (signs are arbitrary per column)")
        print(table(sid))
        print()
