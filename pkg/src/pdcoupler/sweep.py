"""Sweeps over the coupler length, figure presets and CSV rendering.

CSV conventions: comma separated, lowercase header, reals as scientific
notation with 12 significant digits, ``\\n`` line endings.
"""

import math
from dataclasses import asdict, dataclass, fields

from .coupler import CouplerParams, classify_regime
from .dynamics import covariance_at, squeeze_variance, z_grid
from .entanglement import log_negativity
from .errors import InvalidInputError
from .phaseopt import DEFAULT_COARSE_N, DEFAULT_REFINE_TOL, optimize_over_z

QUANTITIES = ("lambda", "en", "regime", "dphi_opt")

# magnitudes (g_L, g_A, g_B) of the reference couplers below and above threshold
BELOW_MAGS = (2.0, 0.2, 0.2)
ABOVE_MAGS = (0.15, 0.2, 0.2)
PRESET_DPHIS = (("0", 0.0), ("pi_2", math.pi / 2), ("pi", math.pi))

FIGURES = {
    "fig2": ("lambda", BELOW_MAGS),
    "fig3": ("lambda", ABOVE_MAGS),
    "fig4": ("en", BELOW_MAGS),
    "fig5": ("en", ABOVE_MAGS),
    "fig6": ("dphi_opt", BELOW_MAGS),
}


def fmt_real(x):
    # adding 0.0 maps -0.0 to 0.0
    return f"{float(x) + 0.0:.11e}"


def render_csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt_real(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepSpec:
    gl_mag: float = 0.0
    ga_mag: float = 0.0
    gb_mag: float = 0.0
    phi_l: float = 0.0
    phi_a: float = 0.0
    phi_b: float = 0.0
    dphi: float | None = None
    z_min: float = 0.0
    z_max: float = 3.0
    z_points: int = 301
    quantities: tuple = ("lambda", "en")
    out: str | None = None
    coarse_n: int = DEFAULT_COARSE_N
    refine_tol: float = DEFAULT_REFINE_TOL

    def __post_init__(self):
        qs = self.quantities
        if isinstance(qs, str):
            qs = [q.strip() for q in qs.split(",") if q.strip()]
        qs = tuple(dict.fromkeys(qs))
        if not qs:
            raise InvalidInputError("at least one quantity is required")
        unknown = [q for q in qs if q not in QUANTITIES]
        if unknown:
            raise InvalidInputError(f"unknown quantities {unknown}; choose from {', '.join(QUANTITIES)}")
        object.__setattr__(self, "quantities", qs)
        if not self.z_min < self.z_max:
            raise InvalidInputError("z_min must be smaller than z_max")
        if self.z_min < 0:
            raise InvalidInputError("z_min must be >= 0")
        if int(self.z_points) != self.z_points or self.z_points < 2:
            raise InvalidInputError("z_points must be an integer >= 2")
        object.__setattr__(self, "z_points", int(self.z_points))
        # validates magnitudes and phases
        self.params()

    def params(self):
        if self.dphi is not None:
            return CouplerParams.from_dphi(self.gl_mag, self.ga_mag, self.gb_mag, self.dphi)
        return CouplerParams(self.gl_mag, self.ga_mag, self.gb_mag, self.phi_l, self.phi_a, self.phi_b)

    @property
    def magnitudes(self):
        return (self.gl_mag, self.ga_mag, self.gb_mag)

    def grid(self):
        return z_grid(self.z_min, self.z_max, self.z_points)

    def to_config(self):
        lines = []
        for key, value in asdict(self).items():
            if value is None:
                continue
            if key == "quantities":
                value = ",".join(value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {
    "gl_mag": float, "ga_mag": float, "gb_mag": float,
    "phi_l": float, "phi_a": float, "phi_b": float, "dphi": float,
    "z_min": float, "z_max": float, "z_points": int,
    "quantities": str, "out": str, "coarse_n": int, "refine_tol": float,
}
assert set(_FIELD_TYPES) == {f.name for f in fields(SweepSpec)}


def parse_config(text):
    """Parse ``key = value`` lines into a dict of typed SweepSpec fields."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _FIELD_TYPES:
            raise InvalidInputError(f"config line {lineno}: cannot parse {raw!r}")
        try:
            values[key] = _FIELD_TYPES[key](value)
        except ValueError as exc:
            raise InvalidInputError(f"config line {lineno}: bad value for {key}: {value!r}") from exc
    return values


def spec_from_config(text, **overrides):
    values = parse_config(text)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SweepSpec(**values)


def run_sweep(spec):
    """Evaluate the requested quantities on the sweep's z grid; returns CSV text."""
    params = spec.params()
    zs = spec.grid()
    columns = {}
    if "lambda" in spec.quantities or "en" in spec.quantities:
        covs = [covariance_at(params, z) for z in zs]
        if "lambda" in spec.quantities:
            columns["lambda"] = [squeeze_variance(v) for v in covs]
        if "en" in spec.quantities:
            columns["en"] = [log_negativity(v).log_neg for v in covs]
    if "regime" in spec.quantities:
        columns["regime"] = [str(classify_regime(params).regime)] * len(zs)
    if "dphi_opt" in spec.quantities:
        optima = optimize_over_z(spec.magnitudes, zs, spec.coarse_n, spec.refine_tol)
        columns["dphi_opt"] = [o.dphi_opt for o in optima]
    header = ["z"] + list(spec.quantities)
    rows = [[z] + [columns[q][i] for q in spec.quantities] for i, z in enumerate(zs)]
    return render_csv(header, rows)


def figure_table(preset, z_min=0.0, z_max=3.0, z_points=301,
                 coarse_n=DEFAULT_COARSE_N, refine_tol=DEFAULT_REFINE_TOL):
    """Header and numeric rows for one of the figure presets."""
    if preset not in FIGURES:
        raise InvalidInputError(f"unknown preset {preset!r}; choose from {', '.join(FIGURES)}")
    quantity, mags = FIGURES[preset]
    zs = z_grid(z_min, z_max, z_points)
    if quantity == "dphi_opt":
        optima = optimize_over_z(mags, zs, coarse_n, refine_tol)
        return ["z", "dphi_opt", "en_max"], [[o.z, o.dphi_opt, o.en_max] for o in optima]

    header = ["z"]
    cols = []
    for label, dphi in PRESET_DPHIS:
        params = CouplerParams.from_dphi(*mags, dphi)
        covs = [covariance_at(params, z) for z in zs]
        if quantity == "lambda":
            cols.append([squeeze_variance(v) for v in covs])
        else:
            cols.append([log_negativity(v).log_neg for v in covs])
        header.append(f"{quantity}_dphi_{label}")
    return header, [[z] + [c[i] for c in cols] for i, z in enumerate(zs)]


def run_figure(preset, **grid):
    header, rows = figure_table(preset, **grid)
    return render_csv(header, rows)


def plot_script(csv_path, header, title=""):
    """Companion gnuplot script for a CSV file."""
    plots = ", \\\n     ".join(
        f"'{csv_path}' using 1:{i + 2} every ::1 with lines title '{name}'" for i, name in enumerate(header[1:])
    )
    return (
        "set datafile separator ','\n"
        f"set title '{title}'\n"
        "set xlabel 'z'\n"
        f"plot {plots}\n"
    )
