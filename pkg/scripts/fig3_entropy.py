"""Thermal entropy and dS/dT of the L = 1000 chain against the classical gravity curve."""

import json

from _common import parser, pyplot

from holoising import cli


def main():
    args = parser(__doc__.splitlines()[0], "results/fig3").parse_args()
    cli.run("entropy", cli.RunConfig(out=str(args.out), threads=args.threads))
    m = json.loads((args.out / "entropy_minima.json").read_text())
    lo, hi = m["chain"]["bracket"]
    print(f"chain dS/dT minimum at T = {m['chain']['T_min']:.5f} (+- {(hi - lo) / 2:.1e}); "
          f"gravity at {m['grav']['T_min']:.5f}; T_HP = {m['hawking_page']:.5f}")
    if not args.plot:
        return
    _, d = cli.read_table(args.out / "entropy.csv")
    plt = pyplot()
    fig, (a, b) = plt.subplots(1, 2, figsize=(8, 3.5))
    a.plot(d[:, 0], d[:, 1], label="chain")
    a.plot(d[:, 0], d[:, 3], "--", label="gravity")
    a.set_ylabel("S")
    b.plot(d[:, 0], d[:, 2], label="chain")
    b.plot(d[:, 0], d[:, 4], "--", label="gravity")
    b.set_ylabel("dS/dT")
    for ax in (a, b):
        ax.set_xlabel("T")
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.out / "fig3.png", dpi=150)


if __name__ == "__main__":
    main()
