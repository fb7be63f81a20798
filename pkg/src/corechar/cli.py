"""Command-line front door.

Every subcommand prints one deterministic report to stdout (JSON by
default, CSV for the tabular comparisons) with the full constants block
echoed, a schema tag, and 15-significant-digit numeric fields; exact
counts are serialized as decimal strings.  Exit codes: 0 success, 1
computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .arith import as_modulus
from .characters import DirichletCharacter, enumerate_characters, principal_character, quadratic_character
from .config import DEFAULT_CONFIG, RunConfig
from .expsums import RealPolynomial, char_sum, decompose, dirichlet_poly, twisted_sum
from .lfunc import (
    l_grid_min,
    l_value,
    vartheta_shape,
    zero_free_params,
    zero_scan_report,
)
from .postnikov import (
    find_postnikov_m,
    main_bound_log,
    minimal_postnikov_degree,
    nontriviality_threshold_iwaniec,
    nontriviality_threshold_main,
)
from .primes import psi, short_interval_check
from .vinogradov import count_vinogradov, ford_bound, ford_k_search, korobov_check

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Deterministic serialization
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".15g")


def emit_json(obj) -> str:
    """Order-preserving JSON with floats at 15 significant digits."""
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{emit_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(emit_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def emit_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    header = list(rows[0].keys())
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for key in header:
            v = row[key]
            if isinstance(v, float):
                cells.append(format(v, ".15g"))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _report(command: str, config: RunConfig, payload: dict) -> dict:
    out = {"schema": SCHEMA_VERSION, "command": command, "config": config.as_dict()}
    out.update(payload)
    return out


def _sum_payload(result) -> dict:
    return {
        "value_re": result.value.real,
        "value_im": result.value.imag,
        "abs": result.abs,
        "terms": str(result.term_count),
        "mode": result.mode,
    }


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------


def parse_character(spec: str, q) -> DirichletCharacter:
    """'principal', 'quadratic', 'index:K', 'primitive:K', or inline JSON."""
    mod = as_modulus(q)
    if spec == "principal":
        return principal_character(mod)
    if spec == "quadratic":
        return quadratic_character(mod)
    if spec.startswith("index:"):
        idx = int(spec.split(":", 1)[1])
        chars = enumerate_characters(mod)
        if not 0 <= idx < len(chars):
            raise ValueError(f"index {idx} out of range 0..{len(chars) - 1}")
        return chars[idx]
    if spec.startswith("primitive:"):
        idx = int(spec.split(":", 1)[1])
        chars = enumerate_characters(mod, primitive_only=True)
        if not 0 <= idx < len(chars):
            raise ValueError(f"primitive index {idx} out of range 0..{len(chars) - 1}")
        return chars[idx]
    data = json.loads(spec)
    chi = DirichletCharacter.from_dict(data)
    if chi.q != mod.q:
        raise ValueError("character modulus disagrees with --q")
    return chi


def parse_polynomial(spec: Optional[str]) -> RealPolynomial:
    """Comma-separated coefficients, constant first; fractions allowed."""
    if not spec:
        return RealPolynomial.zero()
    coeffs = []
    for tok in spec.split(","):
        tok = tok.strip()
        if "/" in tok:
            coeffs.append(Fraction(tok))
        elif "." in tok or "e" in tok or "E" in tok:
            coeffs.append(float(tok))
        else:
            coeffs.append(Fraction(int(tok)))
    return RealPolynomial.make(coeffs)


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if getattr(args, "config", None) else DEFAULT_CONFIG
    overrides = {}
    for name in ("epsilon", "gamma0", "xi0", "c0", "A", "b",
                 "korobov_residual_constant", "work_budget", "seed", "threads"):
        val = getattr(args, name.replace("-", "_"), None)
        if val is not None:
            overrides[name] = val
    if getattr(args, "const_a", None) is not None:
        overrides["a"] = args.const_a
    return cfg.with_overrides(**overrides)


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def cmd_char_sum(args, cfg: RunConfig) -> dict:
    chi = parse_character(args.chi, args.q)
    res = char_sum(chi, args.M, args.N)
    return _report("char-sum", cfg, {"q": args.q, "chi": chi.label(),
                                     "M": args.M, "N": args.N, **_sum_payload(res)})


def cmd_twisted_sum(args, cfg: RunConfig) -> dict:
    chi = parse_character(args.chi, args.q)
    poly = parse_polynomial(args.G)
    res = twisted_sum(chi, args.M, args.N, poly)
    return _report("twisted-sum", cfg, {"q": args.q, "chi": chi.label(),
                                        "M": args.M, "N": args.N,
                                        "G": [str(c) for c in poly.coefficients],
                                        **_sum_payload(res)})


def cmd_dirichlet_poly(args, cfg: RunConfig) -> dict:
    chi = parse_character(args.chi, args.q)
    res = dirichlet_poly(chi, args.M, args.N, args.t)
    return _report("dirichlet-poly", cfg, {"q": args.q, "chi": chi.label(),
                                           "M": args.M, "N": args.N, "t": args.t,
                                           **_sum_payload(res)})


def cmd_decompose(args, cfg: RunConfig) -> dict:
    chi = parse_character(args.chi, args.q)
    poly = parse_polynomial(args.G)
    res = decompose(chi, args.M, args.N, poly, args.s,
                    residual_constant=cfg.korobov_residual_constant,
                    work_budget=cfg.work_budget)
    return _report("decompose", cfg, {
        "q": args.q, "chi": chi.label(), "M": args.M, "N": args.N, "s": args.s,
        "G": [str(c) for c in poly.coefficients],
        "v_re": res.v_value.real, "v_im": res.v_value.imag,
        "reconstruction_re": res.reconstruction.real,
        "reconstruction_im": res.reconstruction.imag,
        "s_re": res.s_value.real, "s_im": res.s_value.imag,
        "residual": res.residual, "allowance": res.allowance,
        "holds": res.holds, "coprime_count": str(res.coprime_count),
        "terms": str(res.term_count),
    })


def cmd_postnikov_verify(args, cfg: RunConfig) -> dict:
    mod = as_modulus(args.q)
    d = args.d if args.d is not None else minimal_postnikov_degree(mod)
    rows = []
    for idx, chi in enumerate(enumerate_characters(mod, primitive_only=True)):
        m = find_postnikov_m(chi, d)
        rows.append({"index": idx, "character": chi.label(), "m": str(m)})
    return _report("postnikov-verify", cfg, {
        "q": args.q, "d": d, "tau": mod.tau, "core": str(mod.core),
        "primitive_characters": len(rows), "verified": True, "multipliers": rows,
    })


def cmd_bound_compare(args, cfg: RunConfig):
    gammas = [int(g) for g in args.gammas.split(",")]
    base = args.base
    rows = []
    for gamma in gammas:
        q = base**gamma
        lq = gamma * math.log(base)
        main_log = nontriviality_threshold_main(q, cfg.xi0)
        iw_log = nontriviality_threshold_iwaniec(q, cfg.a, cfg.xi0)
        rows.append({
            "gamma": gamma,
            "base": base,
            "log_q": lq,
            "xi0": cfg.xi0,
            "a": cfg.a,
            "main_threshold_log_n": main_log,
            "iwaniec_threshold_log_n": iw_log,
            "main_is_smaller": main_log < iw_log,
            "main_over_logq_23": main_log / lq ** (2.0 / 3.0),
            "main_over_logq_34": main_log / lq ** 0.75,
        })
    if (args.format or cfg.output_format) == "csv":
        return emit_csv(rows)
    return _report("bound-compare", cfg, {"rows": rows})


def cmd_vmvt_count(args, cfg: RunConfig) -> dict:
    n = count_vinogradov(args.k, args.d, args.P)
    return _report("vmvt-count", cfg, {"k": args.k, "d": args.d, "P": args.P,
                                       "N": str(n)})


def cmd_korobov_check(args, cfg: RunConfig) -> dict:
    with open(args.spec) as fh:
        spec = json.load(fh)
    coeffs = [Fraction(c) if isinstance(c, str) else c for c in spec["coefficients"]]
    rep = korobov_check(coeffs, spec["k"], spec["P"],
                        denominator_bound=spec.get("denominator_bound"))
    return _report("korobov-check", cfg, {
        "k": rep.k, "d": rep.d, "P": rep.P, "Q": str(rep.Q), "W": rep.W,
        "s_abs": rep.s_abs, "lhs": rep.lhs, "rhs": rep.rhs,
        "lhs_log": rep.lhs_log, "rhs_log": rep.rhs_log, "holds": rep.holds,
        "vinogradov_count": str(rep.vinogradov_count),
        "approximations": [
            {"a": str(a), "b": str(b), "theta": th}
            for a, b, th in rep.coefficient_approximations
        ],
    })


def cmd_ford_bound(args, cfg: RunConfig) -> dict:
    if args.k is not None:
        lb = ford_bound(args.d, args.P, args.k)
        return _report("ford-bound", cfg, {
            "d": args.d, "P": args.P, "k": args.k, "log_bound": lb,
            "meets_lemma_range": args.d >= 129,
        })
    rep = ford_k_search(args.d, args.P)
    return _report("ford-bound", cfg, {
        "d": rep.d, "P": rep.P, "k": rep.k, "log_bound": rep.log_bound,
        "k_range": list(rep.k_range), "meets_lemma_range": rep.meets_lemma_range,
    })


def cmd_lfunc_eval(args, cfg: RunConfig) -> dict:
    chi = parse_character(args.chi, args.q)
    s = complex(args.sigma, args.t)
    val = l_value(chi, s)
    return _report("lfunc-eval", cfg, {
        "q": args.q, "chi": chi.label(), "sigma": args.sigma, "t": args.t,
        "value_re": val.real, "value_im": val.imag, "abs": abs(val),
    })


def cmd_zero_scan(args, cfg: RunConfig) -> dict:
    rep = zero_scan_report(args.q, args.alpha, args.T)
    payload = {
        "q": args.q, "alpha": args.alpha, "T": args.T,
        "alpha_used": rep["alpha_used"], "perturbed": rep["perturbed"],
        "contour_min_abs_l": rep["contour_min_abs_l"],
        "total_zeros": rep["total_zeros"],
        "per_character": rep["per_character"],
    }
    if args.confirm_grid:
        grid = l_grid_min(args.q, args.alpha, args.T)
        payload["grid_min_abs_l"] = grid["min_abs"]
        payload["grid_min_at"] = grid["at"]
    return _report("zero-scan", cfg, payload)


def cmd_zfr_params(args, cfg: RunConfig) -> dict:
    params = zero_free_params(args.q, args.eta, args.T, args.M, A=cfg.A)
    return _report("zfr-params", cfg, {
        "q": args.q, "eta": params.eta, "T": params.T, "M_bound": params.M_bound,
        "vartheta": params.vartheta,
        "etacond_lhs": params.etacond_lhs,
        "etacond_rhs_as_printed": params.etacond_rhs_as_printed,
        "etacond_rhs_corrected": params.etacond_rhs_corrected,
        "etacond_holds_as_printed": params.etacond_holds_as_printed,
        "etacond_holds_corrected": params.etacond_holds_corrected,
        "A_shape": params.A_shape,
        "vartheta_shape": params.vartheta_shape,
    })


def cmd_psi_progression(args, cfg: RunConfig) -> dict:
    rep = short_interval_check(args.q, args.a, args.x, args.h,
                               b=cfg.b, eps=args.eps, c0=cfg.c0)
    return _report("psi-progression", cfg, {
        "q": rep.q, "a": rep.a, "x": rep.x, "h": rep.h,
        "delta_psi": rep.delta_psi, "main_term": rep.main_term,
        "rel_error": rep.rel_error, "theorem_error_shape": rep.theorem_error_shape,
        "b": rep.b, "eps": rep.eps, "c0": rep.c0,
        "window_lower_ok": rep.window_lower_ok,
        "window_upper_ok": rep.window_upper_ok,
        "empty_interval": rep.empty_interval,
    })


def cmd_report_all(args, cfg: RunConfig) -> dict:
    """A bounded battery of reported-not-asserted trend tables."""
    payload: dict = {}

    # character sums vs the main bound shape (data, not an assertion)
    emp_rows = []
    for gamma in (3, 4, 5):
        q = 3**gamma
        chi = enumerate_characters(q, primitive_only=True)[0]
        for N in (q // 3, q // 2, q - 1):
            s_abs = char_sum(chi, 0, N).abs
            emp_rows.append({
                "q": q, "N": N, "abs_sum": s_abs,
                "main_bound_log": main_bound_log(q, N, cfg.xi0),
            })
    payload["char_sum_vs_bound"] = emp_rows

    # |L(1, chi)| trend against (log q)^{2/3} (log log q)^{1/3}
    l_rows = []
    for gamma in range(3, 7):  # the shape denominator needs q >= 16
        q = 3**gamma
        best = 0.0
        for chi in enumerate_characters(q, primitive_only=True):
            best = max(best, abs(l_value(chi, 1.0)))
        denom = vartheta_shape(q, 1.0)
        l_rows.append({"gamma": gamma, "q": q, "max_abs_l1": best,
                       "ratio_to_shape": best * denom})
    payload["l1_trend"] = l_rows

    # psi(x)/x trend
    trend = []
    for k in range(4, 8):
        x = 10**k
        val = psi(x).value
        trend.append({"x": str(x), "psi_over_x_minus_1": val / x - 1.0})
    payload["psi_trend"] = trend
    return _report("report-all", cfg, payload)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--epsilon", type=Fraction)
    p.add_argument("--gamma0", type=int)
    p.add_argument("--xi0", type=float)
    p.add_argument("--c0", type=float)
    p.add_argument("--const-a", dest="const_a", type=float,
                   help="the absolute constant a in the older bound")
    p.add_argument("--A", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--korobov-residual-constant", dest="korobov_residual_constant",
                   type=float)
    p.add_argument("--work-budget", dest="work_budget", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corechar",
        description="character sums, exponential sums and L-functions for "
                    "moduli with a small core",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        _add_config_flags(p)
        p.set_defaults(func=fn)
        return p

    p = add("char-sum", cmd_char_sum)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)

    p = add("twisted-sum", cmd_twisted_sum)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--G", help="polynomial coefficients, constant first")

    p = add("dirichlet-poly", cmd_dirichlet_poly)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--t", type=float, required=True)

    p = add("decompose", cmd_decompose)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--G")

    p = add("postnikov-verify", cmd_postnikov_verify)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int)

    p = add("bound-compare", cmd_bound_compare)
    p.add_argument("--base", type=int, default=3)
    p.add_argument("--gammas", default="100,300,1000")
    p.add_argument("--format", choices=("json", "csv"))

    p = add("vmvt-count", cmd_vmvt_count)
    p.add_argument("k", type=int)
    p.add_argument("d", type=int)
    p.add_argument("P", type=int)

    p = add("korobov-check", cmd_korobov_check)
    p.add_argument("--spec", required=True, help="JSON file: coefficients, k, P")

    p = add("ford-bound", cmd_ford_bound)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--k", type=int)

    p = add("lfunc-eval", cmd_lfunc_eval)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=float, default=0.0)

    p = add("zero-scan", cmd_zero_scan)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--confirm-grid", action="store_true")

    p = add("zfr-params", cmd_zfr_params)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--M", type=float, required=True)

    p = add("psi-progression", cmd_psi_progression)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.05)

    add("report-all", cmd_report_all)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        result = args.func(args, cfg)
    except (ValueError, ArithmeticError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        sys.stdout.write(emit_json(result) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
