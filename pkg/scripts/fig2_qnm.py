"""Late-time decay of the source-free response at L = 1000, T in {1, 2}."""

import json

from _common import parser, pyplot

from holoising import cli


def main():
    args = parser(__doc__.splitlines()[0], "results/fig2").parse_args()
    cli.run("qnm", cli.RunConfig(out=str(args.out), threads=args.threads))
    fits = json.loads((args.out / "qnm_fit.json").read_text())
    for T, f in fits.items():
        print(f"T={T}: rate/(2 pi T) = {f['rate_over_reference']:.4f}  "
              f"offset/amplitude = {f['offset_normalized']:.3e} "
              f"(reference {f['offset_reference']:.3e})")
    if not args.plot:
        return
    plt = pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for T in fits:
        _, data = cli.read_table(args.out / f"qnm_T{T.replace('.', 'p')}.csv")
        ax.semilogy(data[:, 0], data[:, 1], ".", ms=2, label=f"|R|, T={T}")
        ax.semilogy(data[:, 0], data[:, 2], "-", lw=1)
    ax.set_xlabel("t")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out / "fig2.png", dpi=150)


if __name__ == "__main__":
    main()
