"""Figure recipes: declarative descriptions of what to draw from where."""

from dataclasses import dataclass, field

KINDS = ("curves", "rescaled_crossing", "collapse", "loglog_shift")


@dataclass(frozen=True)
class FigureRecipe:
    """One figure: input globs, drawing kind, labels, output path.

    kind selects the renderer:
      curves            one line per sweep CSV, `column` against h
      rescaled_crossing same, y multiplied by N**rescale_power
      collapse          master curve from a *_rescaled.csv
      loglog_shift      pseudocritical shift vs N on log-log axes
    """

    name: str
    kind: str
    inputs: tuple
    output: str
    column: str = ""
    xlabel: str = "h"
    ylabel: str = ""
    title: str = ""
    rescale_power: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("recipe needs at least one input glob")


def default_recipes(sweep_glob="sweep_*.csv",
                    magnetization_rescaled="collapse_sigma_z1_rescaled.csv",
                    susceptibility_rescaled="collapse_chi_z1_rescaled.csv",
                    shift_json="shift.json",
                    outdir="."):
    """The seven stock figures, keyed by name."""
    out = lambda stem: f"{outdir}/{stem}.png"
    recipes = [
        FigureRecipe(
            name="transverse-magnetization", kind="curves",
            inputs=(sweep_glob,), column="sigma_z1",
            ylabel="<sigma^z_1>", title="Impurity transverse magnetization",
            output=out("transverse_magnetization")),
        FigureRecipe(
            name="longitudinal-magnetization", kind="curves",
            inputs=(sweep_glob,), column="sigma_x1_me",
            ylabel="<sigma^x_1>", title="Impurity longitudinal magnetization",
            output=out("longitudinal_magnetization")),
        FigureRecipe(
            name="susceptibility", kind="curves",
            inputs=(sweep_glob,), column="chi_z1",
            ylabel="chi_z1", title="Impurity susceptibility peaks",
            output=out("susceptibility")),
        FigureRecipe(
            name="magnetization-crossing", kind="rescaled_crossing",
            inputs=(sweep_glob,), column="sigma_z1", rescale_power=0.5,
            ylabel="N^(1/2) <sigma^z_1>",
            title="Size-rescaled curves cross at the critical field",
            output=out("magnetization_crossing")),
        FigureRecipe(
            name="magnetization-collapse", kind="collapse",
            inputs=(magnetization_rescaled,),
            xlabel="N^(1/nu) (h - h_ref)", ylabel="N^(e) <sigma^z_1>",
            title="Transverse-magnetization data collapse",
            output=out("magnetization_collapse")),
        FigureRecipe(
            name="susceptibility-collapse", kind="collapse",
            inputs=(susceptibility_rescaled,),
            xlabel="N^(1/nu) (h - h_ref)", ylabel="N^(-e) chi_z1",
            title="Susceptibility data collapse",
            output=out("susceptibility_collapse")),
        FigureRecipe(
            name="shift-fit", kind="loglog_shift",
            inputs=(shift_json,),
            xlabel="N", ylabel="h_pseudo - 1",
            title="Pseudocritical shift vs size",
            output=out("shift_fit")),
    ]
    return {r.name: r for r in recipes}
