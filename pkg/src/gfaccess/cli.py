"""Command-line front end: ``gfaccess {code-check,detect-sim,sinr-validate,tradeoff}``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import code as cc
from . import config as rc
from .attack import AttackerConfig, AttackMode
from .channel import matched_filter_sinr
from .detection import DetectionConfig, calibrate_threshold, detect_activity
from .errors import GfaccessError, UndecodableObservation
from .reliability import (
    SystemConfig,
    db_to_linear,
    gamma_asy,
    sweep,
    sweep_csv,
)
from .rng import stream
from .scenario import Scenario, exact_counts, observed_counts, random_scenario, sample_jam_set

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(cfg: rc.RunConfig, text: str) -> None:
    path = cfg.out_path()
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _say(cfg: rc.RunConfig, msg: str) -> None:
    # keep stdout clean when it carries the CSV
    print(msg, file=sys.stdout if cfg.out else sys.stderr)


def system_config(cfg: rc.RunConfig) -> SystemConfig:
    return SystemConfig(
        n_t=cfg.n_t,
        active=cfg.active,
        k=cfg.k,
        q=cfg.q or None,
        n_r=cfg.n_r,
        n_e=cfg.n_e,
        n_d=cfg.n_d,
        delta_f=cfg.delta_f,
        t_s=cfg.t_s,
        t_extra=cfg.t_extra,
        m_d=cfg.m_d,
        payload_bits=cfg.payload_bits,
        snr_db=cfg.snr_db,
        lam=cfg.lam,
        k_c=None if cfg.k_c < 0 else cfg.k_c,
        taps=cfg.taps,
        xi=cfg.xi,
    )


# ---------------------------------------------------------------------------


def cmd_code_check(cfg: rc.RunConfig) -> int:
    if not cfg.code_q or not cfg.code_t:
        raise rc.ConfigError("code-check needs --code_q and --code_t")
    code = cc.build_code(cfg.code_q, cfg.code_k, cfg.code_t)
    q, k, t = cfg.code_q, cfg.code_k, cfg.code_t
    results = [
        ("constant weight, one-hot blocks", cc.check_weights(code)),
        (f"pairwise block agreement <= {k - 1}", cc.max_block_agreement(code) <= k - 1),
    ]
    if cfg.exhaustive:
        results.append((f"{t}-disjunct (exhaustive)", cc.disjunct_violations(code) == 0))
        results.append((f"sums of <= {t} columns distinct (exhaustive)", cc.all_sums_distinct(code)))
    else:
        rng = stream(cfg.seed, 0)
        bad = cc.random_disjunct_violations(code, cfg.check_trials, rng)
        results.append((f"{t}-disjunct ({cfg.check_trials} random sets)", bad == 0))
    print(f"code q={q} k={k} t={t}: B={code.length} C={code.size} L={code.inner_length}")
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    if cfg.out:
        _emit(cfg, cc.export_text(assign_users(code, cfg.users)))
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


def assign_users(code, users):
    return cc.assign_clusters(code, min(users, code.size))


def _detect_code(cfg: rc.RunConfig):
    G, k = cfg.users, cfg.code_k
    t = cfg.code_t or G + 1
    if t != G + 1:
        raise rc.ConfigError(f"detection needs code order users + 1 = {G + 1}, got {t}")
    q = cfg.code_q
    if not q:
        q = max(2, t * (k - 1))
        while not cc.is_prime(q):
            q += 1
    return cc.assign_clusters(cc.build_code(q, k, t), G)


def _fixed_scenario(code, cfg, rng) -> Scenario:
    s = random_scenario(code, rng, modes=(AttackMode.NO_ATTACKER,), attack_power=cfg.attack_power)
    mode = AttackMode.parse(cfg.attack)
    if mode is AttackMode.PARTIAL_BAND:
        jam = frozenset(int(x) for x in rc.float_list(cfg.jammed)) or sample_jam_set(code, s.columns, rng)
        if not jam:
            return _fixed_scenario(code, cfg, rng)
        return replace(s, attack=AttackerConfig(mode, cfg.attack_power, jam))
    return replace(s, attack=AttackerConfig(mode, cfg.attack_power))


DETECT_HEADER = "trial,true_mode,true_num_alus,true_codewords,mode,num_alus,codewords,exact"


def cmd_detect_sim(cfg: rc.RunConfig) -> int:
    code = _detect_code(cfg)
    if cfg.count_mode not in ("ideal", "eigen"):
        raise rc.ConfigError("count_mode must be 'ideal' or 'eigen'")
    det = None
    if cfg.count_mode == "eigen" and cfg.trials:
        window = cfg.window or cfg.users
        threshold = calibrate_threshold(cfg.n_t, window, cfg.pf, cfg.calib_trials, stream(cfg.seed, 1 << 20))
        det = DetectionConfig(window, cfg.noise_power, threshold, cfg.pf)
        _say(cfg, f"calibrated eigenvalue-ratio threshold {threshold:.6g} (N_T={cfg.n_t}, X={window}, Pf={cfg.pf:g})")

    rows = [DETECT_HEADER]
    tally: dict[str, list[int]] = {}
    for trial in range(cfg.trials):
        rng = stream(cfg.seed, trial)
        if cfg.attack == "mixed":
            s = random_scenario(code, rng, attack_power=cfg.attack_power)
        else:
            s = _fixed_scenario(code, cfg, rng)
        if det is None:
            counts = exact_counts(code, s)
        else:
            counts = observed_counts(code, s, det, rng, n_t=cfg.n_t, snr_db=cfg.pilot_snr_db, taps=cfg.taps, n_e=cfg.n_e)
        truth = [s.expected_mode.value, str(len(s.columns)), ";".join(map(str, sorted(s.columns)))]
        try:
            rep = detect_activity(counts, code)
            got = rep.csv_fields()
            ok = rep.mode is s.expected_mode and rep.alu_codewords == s.columns
        except UndecodableObservation:
            got, ok = ["undecodable", "", ""], False
        rows.append(",".join([str(trial), *truth, *got, str(int(ok))]))
        hit = tally.setdefault(s.attack.mode.value, [0, 0])
        hit[0] += ok
        hit[1] += 1
    _emit(cfg, "\n".join(rows) + "\n")
    total = sum(h[1] for h in tally.values())
    good = sum(h[0] for h in tally.values())
    for mode in AttackMode:
        if mode.value in tally:
            g, n = tally[mode.value]
            _say(cfg, f"{mode.value:>5}: {g}/{n} exact ({100.0 * g / n:.2f}%)")
    if total:
        _say(cfg, f"overall: {good}/{total} exact ({100.0 * good / total:.2f}%)")
    return EXIT_OK


SINR_HEADER = "n_t,lambda,empirical,closed_form,rel_error"


def cmd_sinr_validate(cfg: rc.RunConfig) -> int:
    gamma = db_to_linear(cfg.sinr_snr_db)
    k_c = cfg.sinr_users - 1
    rows = [SINR_HEADER]
    ok = True
    for li, lam in enumerate(rc.float_list(cfg.sinr_lams)):
        errs = []
        for ni, n_t in enumerate(int(x) for x in rc.float_list(cfg.sinr_n_t)):
            est = matched_filter_sinr(
                cfg.sinr_users, n_t, gamma, lam, cfg.trials, seed=[cfg.seed, li, ni],
                taps=cfg.taps, n_e=cfg.n_e,
            )
            ref = gamma_asy(gamma, n_t, k_c, lam)
            err = abs(est.mean_sinr - ref) / ref
            errs.append(err)
            rows.append(",".join(repr(float(v)) for v in (n_t, lam, est.mean_sinr, ref, err)))
        if len(errs) > 1 and not errs[-1] < errs[0]:
            ok = False
    _emit(cfg, "\n".join(rows) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def default_grid(which: str, sysc: SystemConfig) -> list[float]:
    if which == "error":
        return [round(x, 10) for x in np.linspace(0.0, 0.95, 39)]
    if which == "latency":
        lo = (sysc.m_e + 0.5) * sysc.t_s + sysc.t_extra
        return list(np.linspace(lo, 1e-3, 60))
    return list(range(2, 11))


SWEEP_VARS = {"error": "lam", "latency": "latency", "access": "active"}


def cmd_tradeoff(cfg: rc.RunConfig) -> int:
    if cfg.which not in SWEEP_VARS:
        raise rc.ConfigError(f"--which must be one of {sorted(SWEEP_VARS)}")
    sysc = system_config(cfg)
    if cfg.grid == "auto":
        grid = default_grid(cfg.which, sysc)
    else:
        grid = rc.float_list(cfg.grid)
    points = sweep(sysc, SWEEP_VARS[cfg.which], grid)
    _emit(cfg, sweep_csv(points))
    return EXIT_OK


COMMANDS = {
    "code-check": cmd_code_check,
    "detect-sim": cmd_detect_sim,
    "sinr-validate": cmd_sinr_validate,
    "tradeoff": cmd_tradeoff,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfaccess", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH")
        for key, kind in rc.FIELD_TYPES.items():
            p.add_argument(f"--{key}", dest=key, default=None, metavar=kind.upper())
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    path = args.pop("config")
    try:
        cfg = rc.load(path, args)
        return COMMANDS[command](cfg)
    except (rc.ConfigError, GfaccessError, ValueError) as exc:
        print(f"gfaccess {command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
