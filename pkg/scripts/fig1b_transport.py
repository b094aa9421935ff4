"""Antipodal transport ratio for L in {128, 256, 512} and M in {0, 2, 5}, plus the
universal-curve fit.  About five minutes on one core."""

import json

import numpy as np
from _common import parser, pyplot

from holoising import cli, gravity_dual


def main():
    args = parser(__doc__.splitlines()[0], "results/fig1b").parse_args()
    cfg = cli.RunConfig(out=str(args.out), threads=args.threads)
    cli.run("transport", cfg)
    fit = json.loads((args.out / "transport_fit.json").read_text())
    p = fit["params"]
    print(f"ell_eff = {p['ell_eff']:.4f}  G_eff = {p['G_eff']:.4f}  sse = {fit['sse']:.3e}")
    if not args.plot:
        return
    _, data = cli.read_table(args.out / "transport.csv")
    plt = pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for L in np.unique(data[:, 1]):
        for M in np.unique(data[:, 2]):
            sel = (data[:, 1] == L) & (data[:, 2] == M)
            ax.plot(data[sel, 0], data[sel, 3], "o", ms=3, label=f"L={L:g}, M={M:g}")
    T = np.linspace(0, data[:, 0].max(), 300)
    grav = gravity_dual.GravParams(p["ell_eff"], p["G_eff"])
    ax.plot(T, gravity_dual.ads_weight(T, grav), "k-", label="fit")
    ax.set_xlabel("T")
    ax.set_ylabel("antipodal ratio")
    ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(args.out / "fig1b.png", dpi=150)


if __name__ == "__main__":
    main()
