"""Ingoing BTZ null geodesics for Omega = 5, ell = 1 and rho_h in {0.3, 0.1}, and the
AdS antipodal arrival grid."""

import numpy as np
from _common import parser, pyplot

from holoising import cli


def main():
    args = parser(__doc__.splitlines()[0], "results/figS1").parse_args()
    cfg = cli.RunConfig(out=str(args.out), threads=args.threads)
    cli.run("geodesic", cfg)
    _, arrival = cli.read_table(args.out / "ads_arrival.csv")
    print(f"max |t_arrival - pi| over the AdS grid: {np.max(np.abs(arrival[:, 4])):.2e}")
    if not args.plot:
        return
    plt = pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for i, g in enumerate(cfg.geodesics):
        header, d = cli.read_table(args.out / f"geodesic_{i}.csv")
        col = {h: j for j, h in enumerate(header)}
        ax.plot(d[:, col["t"]], d[:, col["r_compactified"]], label=f"rho_h={g['rho_h']:g}")
    ax.set_xlabel("t")
    ax.set_ylabel("r = rho / sqrt(rho^2 + ell^2)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out / "figS1.png", dpi=150)


if __name__ == "__main__":
    main()
