"""Command-line front end.

Subcommands::

    negativity --state <spec>
    evolve     --state <spec> [rates] --t-max T [--dt H] [--stride N] --out FILE
    scan       --mode beta|mixed-c [fixed params] --grid a:b:n --out FILE
    figure     --id 1|2|3|4 --out DIR
    validate

A state spec is a single space-separated token string, either a family
form such as ``family=phi1 alpha=0.6 beta=0.8`` / ``family=mixed b=0.02
c=0.2`` or an amplitude form listing nonzero amplitudes, e.g.
``a00=0.6 a11=0.8`` with complex values written ``<re>[+|-]<im>i``.
All tabular output is CSV with 12-significant-digit numbers.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import dynamics, esd, figures, states, validate
from .dynamics import DecayRates, MixedFamilyParams, StateFamily


def fmt(x: float) -> str:
    """Canonical 12-significant-digit rendering of one number.

    Plain decimal inside |x| in [1e-4, 1e6), lowercase scientific
    notation outside; negative zero folds to zero.
    """
    x = float(x)
    if x == 0.0 or not math.isfinite(x):
        return "0" if x == 0.0 else repr(x)
    if abs(x) < 1e-4 or abs(x) >= 1e6:
        return f"{x:.11e}"
    decimals = 11 - int(math.floor(math.log10(abs(x))))
    out = f"{x:.{decimals}f}"
    return "0" if float(out) == 0.0 else out


def parse_complex(token: str, text: str) -> complex:
    """Parse ``<re>`` or ``<re>+<im>i`` / ``<re>-<im>i`` (no spaces)."""
    if text.endswith("i"):
        body = text[:-1]
        # split at the sign of the imaginary part (skip a leading sign
        # and signs inside exponents)
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                try:
                    return complex(float(body[:pos]), float(body[pos:]))
                except ValueError:
                    break
        raise SpecError(token, "malformed complex value")
    try:
        return complex(float(text), 0.0)
    except ValueError:
        raise SpecError(token, "malformed number") from None


class SpecError(ValueError):
    """State-spec parse failure, naming the offending token."""

    def __init__(self, token: str, reason: str):
        self.token = token
        super().__init__(f"bad state spec token {token!r}: {reason}")


_FAMILY_ALIASES = {
    "phi1": "phi1",
    "phi2plus": "phi2plus",
    "phi2+": "phi2plus",
    "phi2minus": "phi2minus",
    "phi2-": "phi2minus",
    "phi2prime": "phi2prime",
    "phi3plus": "phi3plus",
    "phi3+": "phi3plus",
    "phi3minus": "phi3minus",
    "phi3-": "phi3minus",
    "mixed": "mixed",
}


def parse_state_spec(text: str) -> StateFamily:
    """Parse a state-spec string into a StateFamily.

    Family-form pure states are renormalized after a 1e-9 normalization
    check; amplitude-form states are likewise accepted within 1e-9.
    """
    tokens = text.split()
    if not tokens:
        raise SpecError("<empty>", "no tokens")
    fields: dict[str, str] = {}
    for token in tokens:
        if "=" not in token:
            raise SpecError(token, "expected key=value")
        key, _, value = token.partition("=")
        if not key or not value:
            raise SpecError(token, "expected key=value")
        if key in fields:
            raise SpecError(token, "duplicate key")
        fields[key] = value

    if "family" in fields:
        return _parse_family_form(fields)
    return _parse_amplitude_form(fields)


def _get_float(fields: dict[str, str], key: str) -> float:
    if key not in fields:
        raise SpecError(key, "missing required field")
    try:
        return float(fields[key])
    except ValueError:
        raise SpecError(f"{key}={fields[key]}", "malformed number") from None


def _parse_family_form(fields: dict[str, str]) -> StateFamily:
    name = fields["family"].lower()
    tag = _FAMILY_ALIASES.get(name)
    if tag is None and name != "custom":
        raise SpecError(f"family={fields['family']}", "unknown family")
    if tag == "mixed":
        b = _get_float(fields, "b")
        c = _get_float(fields, "c")
        extra = set(fields) - {"family", "b", "c"}
        if extra:
            raise SpecError(sorted(extra)[0], "unexpected field for mixed family")
        try:
            return StateFamily.from_mixed(MixedFamilyParams.from_bc(b, c))
        except ValueError as exc:
            raise SpecError(f"family=mixed b={b:g} c={c:g}", str(exc)) from None
    if tag is None:
        raise SpecError(f"family={fields['family']}", "unknown family")
    alpha = _get_float(fields, "alpha")
    beta = _get_float(fields, "beta")
    extra = set(fields) - {"family", "alpha", "beta"}
    if extra:
        raise SpecError(sorted(extra)[0], "unexpected field for pure family")
    norm = math.hypot(alpha, beta)
    if abs(norm * norm - 1.0) > 1e-9:
        raise SpecError(
            f"alpha={alpha:g}", f"alpha^2+beta^2 = {norm * norm!r}, not normalized"
        )
    return StateFamily.pure(tag, alpha / norm, beta / norm)


def _parse_amplitude_form(fields: dict[str, str]) -> StateFamily:
    psi = np.zeros(states.DIM, dtype=complex)
    for key, value in fields.items():
        token = f"{key}={value}"
        if len(key) != 3 or key[0] != "a" or not key[1:].isdigit():
            raise SpecError(token, "expected a<qubit><qutrit>=<value>")
        i, j = int(key[1]), int(key[2])
        if i > 1 or j > 2:
            raise SpecError(token, "levels out of range (qubit 0-1, qutrit 0-2)")
        psi[states.amplitude_index(i, j)] = parse_complex(token, value)
    norm = float(np.linalg.norm(psi))
    if abs(norm * norm - 1.0) > 1e-9:
        raise SpecError(
            " ".join(f"{k}={v}" for k, v in fields.items()),
            f"amplitudes not normalized: sum |a|^2 = {norm * norm!r}",
        )
    return StateFamily.from_density(states.pure_to_density(psi / norm))


def format_amplitude_spec(psi: np.ndarray) -> str:
    """Amplitude-form spec text of a pure state (round-trips to 1e-12)."""
    psi = states.check_pure(psi)
    tokens = []
    for i in (0, 1):
        for j in (0, 1, 2):
            amp = psi[states.amplitude_index(i, j)]
            if abs(amp) < 1e-15:
                continue
            re, im = float(amp.real), float(amp.imag)
            if im == 0.0:
                tokens.append(f"a{i}{j}={re!r}")
            else:
                sign = "+" if im >= 0 else "-"
                tokens.append(f"a{i}{j}={re!r}{sign}{abs(im)!r}i")
    return " ".join(tokens)


def _rates_from_args(args) -> DecayRates:
    gamma1 = args.gamma1
    if getattr(args, "k", None) is not None:
        gamma1 = args.k * args.gamma2
    return DecayRates(gamma=args.gamma, gamma1=gamma1, gamma2=args.gamma2)


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be start:stop:count, got {text!r}"
        )
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {text!r}") from None
    if count < 2 or stop <= start:
        raise argparse.ArgumentTypeError(f"grid {text!r} must be increasing, count >= 2")
    return np.linspace(start, stop, count)


# ---------------------------------------------------------------------------
# Subcommand handlers.
# ---------------------------------------------------------------------------


def _cmd_negativity(args) -> int:
    family = parse_state_spec(args.state)
    value = states.negativity(family.initial_density())
    print(fmt(value))
    return 0


def _analytic_negativity(family: StateFamily, rates: DecayRates):
    """Closed/exact negativity-vs-time callable, or None."""
    if family.tag == "phi1":
        return lambda t: dynamics.negativity_phi1_closed(family.beta, rates, t)
    if family.tag in ("phi2plus", "phi2minus"):
        return lambda t: dynamics.negativity_phi2_closed(
            abs(family.alpha), abs(family.beta), rates, t
        )
    if family.tag == "mixed":
        return lambda t: states.negativity(
            dynamics.evolve_mixed_analytic(family.mixed, rates, t)
        )
    return None


def _cmd_evolve(args) -> int:
    family = parse_state_spec(args.state)
    rates = _rates_from_args(args)
    traj = dynamics.evolve_numeric(
        family.initial_density(), rates, args.t_max, dt=args.dt, stride=args.stride
    )
    analytic = _analytic_negativity(family, rates)
    lines = ["t,negativity_analytic,negativity_numeric,rho_trace,min_eigenvalue"]
    for t, rho, neg in zip(traj.times, traj.states, traj.negativities):
        a_field = fmt(analytic(float(t))) if analytic is not None else ""
        trace = float(np.trace(rho).real)
        min_eig = float(states.hermitian_eigenvalues(rho)[0])
        lines.append(
            f"{fmt(float(t))},{a_field},{fmt(float(neg))},{fmt(trace)},{fmt(min_eig)}"
        )
    _write_text(Path(args.out), "\n".join(lines) + "\n")
    return 0


def _cmd_scan(args) -> int:
    if args.mode == "beta":
        rates = _rates_from_args(args)
        scan = esd.scan_beta_boundary(rates, args.grid)
    else:
        if args.b is None:
            raise SystemExit("scan --mode mixed-c requires --b")
        rates = _rates_from_args(args)
        scan = esd.scan_c_boundary(args.b, rates, args.grid)
    lines = [f"{scan.swept},kind,death_time"]
    for value, report in zip(scan.grid, scan.reports):
        death = fmt(report.death_time) if report.death_time is not None else ""
        lines.append(f"{fmt(float(value))},{report.kind},{death}")
    threshold = fmt(scan.threshold) if scan.threshold is not None else "none"
    lines.append(f"threshold,{threshold},")
    _write_text(Path(args.out), "\n".join(lines) + "\n")
    return 0


def _cmd_figure(args) -> int:
    paths = figures.write_figure(args.id, args.out, fmt, render=not args.no_plot)
    for path in paths:
        print(path)
    return 0


def _cmd_validate(args) -> int:
    results = validate.run_all()
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: max_error={res.max_error:.3e} tol={res.tol:g}")
        failed += 0 if res.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def _write_text(path: Path, content: str) -> None:
    try:
        path.write_text(content)
    except OSError as exc:
        raise SystemExit(f"cannot write {path}: {exc}") from None


def _add_rate_flags(parser: argparse.ArgumentParser, with_k: bool = False) -> None:
    parser.add_argument("--gamma", type=float, default=1.0, help="qubit decay rate")
    parser.add_argument("--gamma1", type=float, default=1.0, help="qutrit 1->0 rate")
    parser.add_argument("--gamma2", type=float, default=1.0, help="qutrit 2->0 rate")
    if with_k:
        parser.add_argument(
            "--k",
            type=float,
            default=None,
            help="interference ratio; sets gamma1 = k * gamma2",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esdlab",
        description="Qubit-qutrit dissipative dynamics and entanglement analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_neg = sub.add_parser("negativity", help="negativity of a described state")
    p_neg.add_argument("--state", required=True, help="state spec string")
    p_neg.set_defaults(handler=_cmd_negativity)

    p_evolve = sub.add_parser("evolve", help="evolve a state and write a CSV trajectory")
    p_evolve.add_argument("--state", required=True)
    _add_rate_flags(p_evolve, with_k=True)
    p_evolve.add_argument("--t-max", type=float, required=True)
    p_evolve.add_argument("--dt", type=float, default=1e-3)
    p_evolve.add_argument("--stride", type=int, default=10)
    p_evolve.add_argument("--out", required=True)
    p_evolve.set_defaults(handler=_cmd_evolve)

    p_scan = sub.add_parser("scan", help="locate a sudden-death boundary")
    p_scan.add_argument("--mode", choices=("beta", "mixed-c"), required=True)
    _add_rate_flags(p_scan, with_k=True)
    p_scan.add_argument("--b", type=float, default=None, help="mixed-family b")
    p_scan.add_argument("--grid", type=_parse_grid, required=True)
    p_scan.add_argument("--out", required=True)
    p_scan.set_defaults(handler=_cmd_scan)

    p_fig = sub.add_parser("figure", help="emit data and plot for one figure")
    p_fig.add_argument("--id", type=int, choices=figures.FIGURE_IDS, required=True)
    p_fig.add_argument("--out", required=True, help="output directory")
    p_fig.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    p_fig.set_defaults(handler=_cmd_figure)

    p_val = sub.add_parser("validate", help="run the cross-module check suite")
    p_val.set_defaults(handler=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
