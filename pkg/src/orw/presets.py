"""Built-in systems, their measures, predicates, machines and family templates.

Every preset is stored as system-file text, so ``export_preset`` output can be
edited and reloaded with :func:`orw.systemfile.load_system`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .rewrite import System
from .systemfile import SystemFileError, load_system

DEFAULT_GENS = ("x",)

_ALPHA_P = "rule alpha(u, v): P(u) P(v) -> P(P(u) v) + P(u P(v)) + lambda P(u v)"
_BETA_D = ("rule beta(w1: ne, w2: ne): D(w1) D(w2) -> "
           "lambda^-1 (D(w1 w2) - D(w1) w2 - w1 D(w2))")
_PHI_D = "rule phi: D(1) -> 0"

TEXTS: dict[str, str] = {
    "XD": f"""\
ops D
lambda 1
phi D_theta_star
measure diff-weight
pda A_D
rule alpha(u: ne, v: ne): D(u v) -> D(u) v + u D(v) + lambda D(u) D(v)
{_PHI_D}
""",
    "XD_reduced": f"""\
ops D
lambda 1
phi D_theta_star
companion XD
measure diff-weight
pda A_D
rule alpha(u...: dtheta): D(u...) -> leibniz
{_PHI_D}
""",
    "YD": f"""\
ops D
lambda 1
requires lambda-nonzero
phi Phi_D
measure op-count
pda A_D
rule alpha(u: ne, v: ne): D(u) D(v) -> lambda^-1 (D(u v) - D(u) v - u D(v))
{_PHI_D}
""",
    "YD_reduced": f"""\
ops D
lambda 1
requires lambda-nonzero
phi Phi_D
companion YD
measure op-count
pda A_D
rule alpha(u: phi ne, v: phi ne): D(u) D(v) -> lambda^-1 (D(NF(u v)) - NF(D(u) v) - NF(u D(v)))
{_PHI_D}
""",
    "XP": f"""\
ops P
lambda 1
phi Phi_P
measure rb-weight
pda A_P
{_ALPHA_P}
""",
    "XP_reduced": """\
ops P
lambda 1
phi Phi_P
companion XP
measure rb-weight
pda A_P
rule alpha(u: phi, v: phi): P(u) P(v) -> P(NF(P(u) v)) + P(NF(u P(v))) + lambda P(NF(u v))
""",
    "XI": """\
ops B
lambda 1
phi Phi_I
measure count:B(B(u))
rule beta(u): B(B(u)) -> u
""",
    "XI_reduced": """\
ops B
lambda 1
phi Phi_I
companion XI
measure count:B(B(u))
rule beta(u: nf notbracket): B(B(u)) -> u
""",
    "X_DRB_pre": f"""\
ops P D
lambda 1
requires lambda-nonzero
measure pd-weight
{_ALPHA_P}
{_BETA_D}
rule gamma(u): D(P(u)) -> u
{_PHI_D}
""",
    # The two mixed rules are oriented from the identities D(P(u)w) and
    # D(wP(v)) expanded by the Leibniz rule and D∘P = id.
    "XPD": f"""\
ops P D
lambda 1
requires lambda-nonzero
phi Phi_PD
measure pd-weight
pda A_PD
{_ALPHA_P}
{_BETA_D}
rule gamma(u): D(P(u)) -> u
rule delta1(u, w2: ne): P(u) D(w2) -> D(P(u) w2) - u w2 - lambda u D(w2)
rule delta2(w1: ne, v): D(w1) P(v) -> D(w1 P(v)) - w1 v - lambda D(w1) v
{_PHI_D}
""",
    "XPD_reduced": f"""\
ops P D
lambda 1
requires lambda-nonzero
phi Phi_PD
companion XPD
measure pd-weight
pda A_PD
rule alpha(u: phi, v: phi): P(u) P(v) -> P(NF(P(u) v)) + P(NF(u P(v))) + lambda P(NF(u v))
rule beta(w1: phi ne not-P, w2: phi ne not-P): D(w1) D(w2) -> lambda^-1 (NF(D(w1 w2)) - NF(D(w1) w2) - NF(w1 D(w2)))
rule gamma(u: phi): D(P(u)) -> u
rule delta1(u: phi, w2: phi ne not-P): P(u) D(w2) -> NF(D(P(u) w2)) - NF(u w2) - lambda NF(u D(w2))
rule delta2(w1: phi ne not-P, v: phi): D(w1) P(v) -> NF(D(w1 P(v))) - NF(w1 v) - lambda NF(D(w1) v)
{_PHI_D}
""",
    "no_monomial_order": """\
ops B
gens x y z
lambda 1
measure count:x B(y) z
rule r: x B(y) z -> B(x) y B(z) + B(x) B(y) z + x B(y) B(z)
""",
}

NAMES = tuple(TEXTS)

# Family templates: (group, kind, left rule, right rule, pattern).  Inclusion
# patterns describe the outer source with the inner source marked: ``q{...}``
# anywhere inside the segment, ``{...}`` exactly there.  The left rule of an
# inclusion is the outer one.  ``s``, ``t``, ``r`` stand for nonempty monomials.
_I, _N = "intersection", "inclusion"

XP_FAMILIES = [
    ("i", _I, "alpha", "alpha", "P(u)P(v)P(w)"),
    ("ii", _N, "alpha", "alpha", "P(q{P(u)P(v)})P(w)"),
    ("iii", _N, "alpha", "alpha", "P(u)P(q{P(v)P(w)})"),
]

_GROUPS = {
    ("alpha", "alpha"): [(_I, "P(u)P(v)P(w)"), (_N, "P(q{P(u)P(v)})P(w)"),
                         (_N, "P(u)P(q{P(v)P(w)})")],
    ("alpha", "beta"): [(_N, "P(q{D(s)D(t)})P(u)"), (_N, "P(u)P(q{D(s)D(t)})")],
    ("alpha", "gamma"): [(_N, "P(q{D(P(u))})P(v)"), (_N, "P(u)P(q{D(P(v))})")],
    ("alpha", "delta1"): [(_I, "P(u)P(v)D(s)"), (_N, "P(q{P(u)D(s)})P(v)"),
                          (_N, "P(u)P(q{P(v)D(s)})")],
    ("alpha", "delta2"): [(_N, "P(q{D(s)P(u)})P(v)"), (_N, "P(u)P(q{D(s)P(v)})")],
    ("alpha", "phi"): [(_N, "P(q{D(1)})P(w)"), (_N, "P(u)P(q{D(1)})")],
    ("beta", "alpha"): [(_N, "D(q{P(u)P(v)})D(s)"), (_N, "D(s)D(q{P(u)P(v)})")],
    ("beta", "beta"): [(_I, "D(s)D(t)D(r)"), (_N, "D(q{D(s)D(t)})D(r)"),
                       (_N, "D(s)D(q{D(t)D(r)})")],
    ("beta", "gamma"): [(_N, "{D(P(u))}D(s)"), (_N, "D(s){D(P(u))}"),
                        (_N, "D(q{D(P(u))})D(s)"), (_N, "D(s)D(q{D(P(u))})")],
    ("beta", "delta1"): [(_N, "D(q{P(u)D(s)})D(t)"), (_N, "D(s)D(q{P(u)D(t)})")],
    ("beta", "delta2"): [(_I, "D(s)D(t)P(u)"), (_N, "D(q{D(s)P(u)})D(t)"),
                         (_N, "D(s)D(q{D(t)P(u)})")],
    ("beta", "phi"): [(_N, "D(q{D(1)})D(s)"), (_N, "D(s)D(q{D(1)})")],
    ("gamma", "alpha"): [(_N, "D(P(q{P(u)P(v)}))")],
    ("gamma", "beta"): [(_N, "D(P(q{D(s)D(t)}))")],
    ("gamma", "gamma"): [(_N, "D(P(q{D(P(u))}))")],
    ("gamma", "delta1"): [(_N, "D(P(q{P(u)D(s)}))")],
    ("gamma", "delta2"): [(_N, "D(P(q{D(s)P(u)}))")],
    ("gamma", "phi"): [(_N, "D(P(q{D(1)}))")],
    ("delta1", "alpha"): [(_N, "P(q{P(u)P(v)})D(s)"), (_N, "P(u)D(q{P(v)P(w)})")],
    ("delta1", "beta"): [(_I, "P(u)D(s)D(t)"), (_N, "P(q{D(s)D(t)})D(u)"),
                         (_N, "P(u)D(q{D(s)D(t)})")],
    ("delta1", "gamma"): [(_N, "P(u){D(P(v))}"), (_N, "P(q{D(P(u))})D(s)"),
                          (_N, "P(u)D(q{D(P(v))})")],
    ("delta1", "delta1"): [(_N, "P(q{P(u)D(s)})D(t)"), (_N, "P(u)D(q{P(v)D(s)})")],
    ("delta1", "delta2"): [(_I, "P(u)D(s)P(v)"), (_N, "P(q{D(s)P(u)})D(t)"),
                           (_N, "P(u)D(q{D(s)P(v)})")],
    ("delta1", "phi"): [(_N, "P(q{D(1)})D(s)"), (_N, "P(u)D(q{D(1)})")],
    ("delta2", "alpha"): [(_I, "D(s)P(u)P(v)"), (_N, "D(q{P(u)P(v)})P(w)"),
                          (_N, "D(s)P(q{P(u)P(v)})")],
    ("delta2", "beta"): [(_N, "D(q{D(s)D(t)})P(u)"), (_N, "D(s)P(q{D(t)D(r)})")],
    ("delta2", "gamma"): [(_N, "{D(P(u))}P(v)"), (_N, "D(q{D(P(u))})P(v)"),
                          (_N, "D(s)P(q{D(P(u))})")],
    ("delta2", "delta1"): [(_I, "D(s)P(u)D(t)"), (_N, "D(q{P(u)D(s)})P(v)"),
                           (_N, "D(s)P(q{P(u)D(t)})")],
    ("delta2", "delta2"): [(_N, "D(q{D(s)P(u)})P(v)"), (_N, "D(s)P(q{D(t)P(u)})")],
    ("delta2", "phi"): [(_N, "D(q{D(1)})P(u)"), (_N, "D(s)P(q{D(1)})")],
}

_GREEK = {"alpha": "α", "beta": "β", "gamma": "γ", "delta1": "δ1", "delta2": "δ2",
          "phi": "φ"}

XPD_FAMILIES = [(f"{_GREEK[a]}∧{_GREEK[b]}", kind, a, b, pat)
                for (a, b), entries in _GROUPS.items() for kind, pat in entries]

# The two branchings the pre-completion system cannot close.
X_DRB_PRE_OBSTRUCTIONS = [
    ("β∧γ", _N, "beta", "gamma", "{D(P(u))}D(s)"),
    ("β∧γ", _N, "beta", "gamma", "D(s){D(P(u))}"),
]

# Sources of the rules completion is expected to add to X_DRB_pre.
COMPLETION_TARGETS = {"delta1": "P(u)D(s)", "delta2": "D(s)P(u)"}

FAMILIES: dict[str, list] = {
    "XP": XP_FAMILIES,
    "XPD": XPD_FAMILIES,
    "X_DRB_pre": XPD_FAMILIES,
}

TEMPLATE_VARS = {"u": 0, "v": 0, "w": 0, "s": 1, "t": 1, "r": 1}


def _resolver(cache: dict):
    def resolve(name, gens, lam):
        key = (name, tuple(gens), Fraction(lam))
        if key not in cache:
            cache[key] = _load(name, gens, lam, cache)
        return cache[key]
    return resolve


def _load(name: str, gens, lam, cache: dict) -> System:
    try:
        text = TEXTS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(NAMES)}")
    try:
        system = load_system(text, name=name, resolver=_resolver(cache), gens=gens, lam=lam)
    except SystemFileError as e:
        if "nonzero lambda" in str(e):
            raise ValueError(f"preset {name} requires lambda != 0") from None
        raise ValueError(f"preset {name} does not load over generators {gens}: {e}") from None
    system.families = FAMILIES.get(name, [])
    return system


def load_preset(name: str, gens: Sequence[str] | None = None, lam=1) -> System:
    """A fresh preset system.  ``gens`` defaults to the preset's own
    generators, or ``x``."""
    if gens is None:
        gens = _file_gens(name) or DEFAULT_GENS
    return _load(name, tuple(gens), Fraction(lam), {})


def _file_gens(name: str):
    for line in TEXTS.get(name, "").splitlines():
        if line.startswith("gens "):
            return tuple(line.split()[1:])
    return None


def export_preset(name: str, gens: Sequence[str] | None = None, lam=1) -> str:
    """The preset as system-file text with explicit generators and lambda."""
    if name not in TEXTS:
        raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(NAMES)}")
    gens = tuple(gens) if gens is not None else (_file_gens(name) or DEFAULT_GENS)
    out = [f"# preset {name}", f"gens {' '.join(gens)}"]
    for line in TEXTS[name].splitlines():
        if line.startswith("gens "):
            continue
        if line.startswith("lambda "):
            line = f"lambda {Fraction(lam)}"
        out.append(line)
    return "\n".join(out) + "\n"
