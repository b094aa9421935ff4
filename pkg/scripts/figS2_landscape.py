"""SSE landscape over (ell, G) for the transport data, with the higher-curvature curve.

Pass ``--points`` with a transport.csv from fig1b_transport.py to skip the sweep."""

import json

import numpy as np
from _common import parser, pyplot

from holoising import cli


def main():
    ap = parser(__doc__.splitlines()[0], "results/figS2")
    ap.add_argument("--points", default=None)
    args = ap.parse_args()
    cli.run("landscape", cli.RunConfig(out=str(args.out), threads=args.threads, points=args.points))
    s = json.loads((args.out / "landscape_summary.json").read_text())
    hc = s["higher_curvature_point"]
    print(f"fit (ell, G) = ({s['fit']['ell_eff']:.4f}, {s['fit']['G_eff']:.4f}); "
          f"higher-curvature G(ell_eff) = {hc['G']:.4f}, SSE ratio {hc['sse_over_minimum']:.3f}")
    if not args.plot:
        return
    header, grid = cli.read_table(args.out / "landscape.csv")
    G = np.array([float(h.split("=")[1]) for h in header[1:]])
    _, curve = cli.read_table(args.out / "higher_curvature.csv")
    plt = pyplot()
    fig, ax = plt.subplots(figsize=(5, 4))
    mesh = ax.pcolormesh(G, grid[:, 0], np.log10(grid[:, 1:]), shading="auto")
    fig.colorbar(mesh, label="log10 SSE")
    ax.plot(curve[:, 1], curve[:, 0], "w-", lw=1)
    ax.set_xlim(G.min(), G.max())
    ax.set_xlabel("G")
    ax.set_ylabel("ell")
    fig.tight_layout()
    fig.savefig(args.out / "figS2.png", dpi=150)


if __name__ == "__main__":
    main()
