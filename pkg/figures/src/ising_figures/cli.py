"""Command line entry point: render stock or ad hoc figure recipes."""

import argparse
import sys

from .recipes import KINDS, FigureRecipe, default_recipes


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ising-lab-figures",
        description="Render figures from ising-lab CLI output files.")
    sub = parser.add_subparsers(dest="command", required=True)

    lister = sub.add_parser("list", help="list the stock recipe names")
    lister.set_defaults(func=cmd_list)

    stock = sub.add_parser("stock", help="render one stock recipe")
    stock.add_argument("name")
    stock.add_argument("--sweeps", default="sweep_*.csv",
                       help="glob for sweep CSVs")
    stock.add_argument("--magnetization-rescaled",
                       default="collapse_sigma_z1_rescaled.csv")
    stock.add_argument("--susceptibility-rescaled",
                       default="collapse_chi_z1_rescaled.csv")
    stock.add_argument("--shift-json", default="shift.json")
    stock.add_argument("--outdir", default=".")
    stock.set_defaults(func=cmd_stock)

    custom = sub.add_parser("custom", help="render an ad hoc recipe")
    custom.add_argument("--kind", choices=KINDS, required=True)
    custom.add_argument("--inputs", nargs="+", required=True)
    custom.add_argument("--out", required=True)
    custom.add_argument("--column", default="")
    custom.add_argument("--rescale-power", type=float, default=0.0)
    custom.add_argument("--xlabel", default="h")
    custom.add_argument("--ylabel", default="")
    custom.add_argument("--title", default="")
    custom.set_defaults(func=cmd_custom)
    return parser


def cmd_list(args) -> int:
    for name in default_recipes():
        print(name)
    return 0


def cmd_stock(args) -> int:
    from .render import render
    recipes = default_recipes(
        sweep_glob=args.sweeps,
        magnetization_rescaled=args.magnetization_rescaled,
        susceptibility_rescaled=args.susceptibility_rescaled,
        shift_json=args.shift_json,
        outdir=args.outdir)
    if args.name == "all":
        for recipe in recipes.values():
            print(render(recipe))
        return 0
    if args.name not in recipes:
        raise KeyError(f"unknown recipe {args.name!r}; try 'list'")
    print(render(recipes[args.name]))
    return 0


def cmd_custom(args) -> int:
    from .render import render
    recipe = FigureRecipe(
        name="custom", kind=args.kind, inputs=tuple(args.inputs),
        output=args.out, column=args.column,
        rescale_power=args.rescale_power, xlabel=args.xlabel,
        ylabel=args.ylabel, title=args.title)
    print(render(recipe))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
