"""Sweeps and studies driven by a resolved configuration dictionary.

Each ``run_*`` function returns a list of :class:`Table` objects, one per CSV file.
Monte Carlo points are independent jobs seeded by ``point_seed(master, index)``, so
results do not depend on the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .config import param_hash, point_seed, sweep_values
from .constants import dbm_to_watt, lin_to_db, watt_to_dbm
from .electronics import (
    ElectronicsLinkParams,
    FloorConvention,
    noise_components_elec,
    snr_rx_elec,
    snr_tx_elec,
)
from .exceptions import ConfigError, EstimationError
from .link_budget import ChannelParams, link_budget
from .metrics import analytic_crossing, crossing
from .phase_noise import LaserPhaseModel, RfPhaseModel, band_average, estimate_psd, rf_phase
from .photonics import PhotonicsLinkParams, noise_components, snr_rx, snr_tx
from .rx_dsp import IqImbalance, PllConfig
from .signal import BerResult, group_by_power, make_constellation
from .simulation import LinkScenario, simulate_link
from .validation import SCENARIOS

MIN_ERRORS = 100
BLOCK_SYMBOLS = 20_000


@dataclass
class Table:
    """Rows destined for one CSV file."""

    name: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, **values):
        self.rows.append([values.get(c, "") for c in self.columns])

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


# Parameter construction -----------------------------------------------------------

def photonics_params(cfg, **changes):
    ph = dict(cfg["photonics"], **changes)
    gain_db = ph["edfa_gain_db"]
    if ph["case"] == "fixed-output":
        gain_db = ph["edfa_output_dbm"] - ph["edfa_input_dbm"]
    elif ph["case"] != "fixed-gain":
        raise ConfigError(f"unknown photonics case {ph['case']!r}")
    return PhotonicsLinkParams.from_levels(
        edfa_input_dbm=ph["edfa_input_dbm"],
        edfa_gain_db=max(gain_db, 0.0),
        lo_total_dbm=ph["lo_total_dbm"],
        rin_db=ph["rin_db"],
        responsivity=ph["responsivity"],
        nu=ph["nu"],
        b_opt=ph["b_opt"],
        bandwidth=ph["bandwidth"],
        nf_db=ph["nf_db"],
        ge_db=ph["ge_db"],
        temperature=ph["temperature"],
        alpha=ph["alpha"],
    ), gain_db


def electronics_params(cfg, **changes):
    el = dict(cfg["electronics"], **changes)
    return ElectronicsLinkParams.from_levels(
        p_s_dbm=el["p_s_dbm"],
        p_lo_dbm=el["p_lo_dbm"],
        n=int(el["n"]),
        floor_tx_dbc=el["floor_tx_dbc"],
        floor_rx_dbc=el["floor_rx_dbc"],
        b_osc=el["b_osc"],
        bandwidth=el["bandwidth"],
        nf_db=el["nf_db"],
        ge_db=el["ge_db"],
        temperature=el["temperature"],
        alpha=el["alpha"],
        tx_convention=FloorConvention(el["tx_sideband_factor"], el["tx_after_multiplier"]),
        rx_convention=FloorConvention(el["rx_sideband_factor"], el["rx_after_multiplier"]),
    )


def link_params(cfg):
    if cfg["experiment"]["chain"] == "photonics":
        return photonics_params(cfg)[0]
    return electronics_params(cfg)


def with_received_power(params, p_rx_dbm):
    return params.with_(alpha=params.alpha_for_received_power(float(dbm_to_watt(p_rx_dbm))))


def scenario(cfg, order, p_rx_dbm, **overrides):
    """Monte Carlo scenario at one received power, impairments taken from ``cfg``."""
    imp = dict(cfg["impairments"], **overrides)
    sig = cfg["signal"]
    tau = 1.0 / (sig["symbol_rate"] * sig["sps"])
    phase_model = None
    if imp["phase_noise"] == "laser" and imp["linewidth_hz"] > 0:
        phase_model = LaserPhaseModel(imp["linewidth_hz"], int(imp["n_lasers"]), tau)
    elif imp["phase_noise"] == "rf":
        phase_model = RfPhaseModel.from_db(imp["k0_db"], imp["k2"], imp["k3"], tau=tau, n_taps=int(imp["fir_taps"]) or None)
    elif imp["phase_noise"] not in ("none", "laser"):
        raise ConfigError(f"unknown phase noise model {imp['phase_noise']!r}")
    iq = None
    if imp["iq_amplitude_db"] or imp["iq_phase_deg"]:
        iq = IqImbalance(imp["iq_amplitude_db"], np.deg2rad(imp["iq_phase_deg"]))
    pll = None
    if imp["pll"]:
        pll = PllConfig(imp["pll_detector_gain"], imp["pll_oscillator_gain"], imp["pll_damping"], imp["pll_bandwidth"])
    return LinkScenario(
        params=with_received_power(link_params(cfg), p_rx_dbm),
        order=int(order),
        n_symbols=BLOCK_SYMBOLS,
        sps=int(sig["sps"]),
        rolloff=sig["rolloff"],
        span=int(sig["span"]),
        symbol_rate=sig["symbol_rate"],
        noise=imp["noise"],
        phase_model=phase_model,
        cfo=imp["cfo_hz"],
        estimate_cfo=bool(imp["estimate_cfo"]),
        iq_tx=iq,
        iq_rx=iq,
        pll=pll,
    )


# Monte Carlo point evaluation -------------------------------------------------------

def run_point(scn, budget, seed, min_errors=MIN_ERRORS):
    """Simulate blocks until ``min_errors`` bit errors or ``budget`` symbols, whichever first."""
    errors = bits = symbols = 0
    block = 0
    while symbols < budget:
        n = min(scn.n_symbols, budget - symbols)
        res = simulate_link(_resize(scn, n), np.random.SeedSequence([seed, block]))
        errors += res.ber.errors
        bits += res.ber.bits
        symbols += n
        block += 1
        if errors >= min_errors:
            break
    return BerResult(errors, bits), symbols


def _resize(scn, n):
    from dataclasses import replace

    return scn if scn.n_symbols == n else replace(scn, n_symbols=int(n))


def _job(args):
    return run_point(*args)


def map_points(jobs, workers):
    """Evaluate ``(scenario, budget, seed, min_errors)`` jobs, preserving input order."""
    if workers <= 1 or len(jobs) <= 1:
        return [_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=int(workers)) as pool:
        return list(pool.map(_job, jobs))


BER_COLUMNS = [
    "modulation", "p_rx_dbm", "alpha", "snr_rx_db", "ber", "bit_errors", "bits", "symbols",
    "ci_low", "ci_high", "ber_awgn_ref", "low_confidence", "seed", "param_hash",
]


def _ber_row(table, scn, order, p_rx, res, symbols, seed, digest, **extra):
    lo, hi = res.wilson_interval()
    table.add(
        modulation=order, p_rx_dbm=p_rx, alpha=scn.params.alpha, snr_rx_db=scn.analytic_snr_db(),
        ber=res.ber, bit_errors=res.errors, bits=res.bits, symbols=symbols, ci_low=lo, ci_high=hi,
        ber_awgn_ref=scn.reference_ber(), low_confidence=int(res.errors < MIN_ERRORS),
        seed=seed, param_hash=digest, **extra,
    )


def run_ber_sweep(cfg):
    """BER versus received power for every configured modulation."""
    digest = param_hash(cfg)
    master = cfg["experiment"]["seed"]
    budget = int(cfg["experiment"]["symbols"])
    if cfg["sweep"]["axis"] != "p_rx_dbm":
        raise ConfigError("ber-sweep sweeps p_rx_dbm")
    grid = sweep_values(cfg)
    jobs, meta = [], []
    for order in cfg["signal"]["modulations"]:
        for p_rx in grid:
            seed = point_seed(master, len(jobs))
            scn = scenario(cfg, order, p_rx)
            jobs.append((scn, budget, seed, cfg["experiment"]["min_errors"]))
            meta.append((scn, order, p_rx, seed))
    results = map_points(jobs, cfg["experiment"]["workers"])
    table = Table("ber_sweep", BER_COLUMNS)
    for (scn, order, p_rx, seed), (res, n) in zip(meta, results):
        _ber_row(table, scn, order, p_rx, res, n, seed, digest)
    return [table]


# Analytic sweeps ----------------------------------------------------------------------

SNR_COLUMNS = [
    "axis", "value", "snr_tx_db", "snr_rx_db", "p_rx_dbm", "sin_w", "sdn_w", "sin_pct", "sdn_pct",
    "edfa_gain_db", "feasible", "param_hash",
]

PHOTONICS_AXES = ("edfa_input_dbm", "lo_total_dbm", "rin_db", "alpha", "p_rx_dbm")
ELECTRONICS_AXES = ("floor_tx_dbc", "floor_rx_dbc", "alpha", "p_rx_dbm")


def run_snr_sweep(cfg):
    """Closed-form transmit and receive SNR along one axis."""
    digest = param_hash(cfg)
    axis = cfg["sweep"]["axis"]
    photonic = cfg["experiment"]["chain"] == "photonics"
    allowed = PHOTONICS_AXES if photonic else ELECTRONICS_AXES
    if axis not in allowed:
        raise ConfigError(f"snr-sweep axis must be one of {allowed}, got {axis!r}")
    table = Table("snr_sweep", SNR_COLUMNS)
    for value in sweep_values(cfg):
        gain_db = ""
        if photonic:
            changes = {} if axis == "p_rx_dbm" else {axis: float(value)}
            p, gain_db = photonics_params(cfg, **changes)
            if gain_db < 0:
                table.add(axis=axis, value=value, edfa_gain_db=gain_db, feasible=0, param_hash=digest)
                continue
            if axis == "p_rx_dbm":
                p = with_received_power(p, value)
            tx, (rx, nb) = snr_tx(p), snr_rx(p)
        else:
            changes = {} if axis == "p_rx_dbm" else {axis: float(value)}
            p = electronics_params(cfg, **changes)
            if axis == "p_rx_dbm":
                p = with_received_power(p, value)
            tx, (rx, nb) = snr_tx_elec(p), snr_rx_elec(p)
        table.add(
            axis=axis, value=value, snr_tx_db=tx, snr_rx_db=rx, p_rx_dbm=watt_to_dbm(p.received_power),
            sin_w=nb.sin, sdn_w=nb.sdn, sin_pct=100 * nb.sin_fraction, sdn_pct=100 * nb.sdn_fraction,
            edfa_gain_db=gain_db, feasible=1, param_hash=digest,
        )
    return [table]


# Noise statistics -----------------------------------------------------------------------

def _expected_group_terms(p, power):
    """Closed-form variance of each noise term for symbols of power ``power``."""
    if isinstance(p, PhotonicsLinkParams):
        a2 = p.alpha**2
        x_term = p.responsivity**2 * p.p1 * p.sigma2_opt / 2
        n_tx = p.noise_tx_power - x_term + power * x_term
        return {
            "n1_tx": a2 * p.g2**2 * n_tx,
            "n2_lo": a2 * p.g1**2 * power * p.noise_lo_power,
            "n3_product": a2 * p.noise_lo_power * n_tx,
            "n4_thermal": p.sigma2_th,
        }
    a2 = p.alpha**2
    return {
        "ne1_thermal": a2 * p.p_lo * p.sigma2_th_tx + p.sigma2_th_rx,
        "ne2_product": a2 * p.sigma2_lo * p.sigma2_th_tx,
        "ne3_floor": a2 * p.p_s * power * (p.p_lo * p.sigma2_c + p.sigma2_lo),
        "ne4_product": a2 * p.p_s * power * p.sigma2_c * p.sigma2_lo,
    }


def noise_statistics(params, order, n_samples, seed):
    """Per-symbol-group noise moments and Gaussianity tests at one operating point.

    Noise is drawn conditionally on each transmitted symbol, one sample per
    symbol, so group variances isolate the dependence on symbol power.
    """
    rng = np.random.default_rng(seed)
    const = make_constellation(order)
    idx = const.random_indices(n_samples, rng)
    x = const.points[idx]
    comps = (noise_components if isinstance(params, PhotonicsLinkParams) else noise_components_elec)(params, x, rng)
    total = sum(comps.values())
    groups = []
    for power, members in group_by_power(const):
        mask = np.isin(idx, members)
        sample = total[mask]
        std = np.std(sample.real)
        ks = stats.kstest(sample.real / std, "norm") if sample.size > 1 else None
        groups.append({
            "power": power,
            "count": int(mask.sum()),
            "variance": float(np.mean(np.abs(sample) ** 2)),
            "expected": float(sum(_expected_group_terms(params, power).values())),
            "terms": {k: float(np.mean(np.abs(v[mask]) ** 2)) for k, v in comps.items()},
            "ks_pvalue": float(ks.pvalue) if ks else float("nan"),
            "real_part": sample.real,
        })
    return groups


def affine_fit(powers, variances):
    """Least-squares line through (power, variance).

    Returns slope, intercept, R^2 and the standard error of the intercept.
    """
    fit = stats.linregress(powers, variances)
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2), float(fit.intercept_stderr)


def run_noise_stats(cfg):
    digest = param_hash(cfg)
    ns = cfg["noise_stats"]
    params = link_params(cfg)
    seed = point_seed(cfg["experiment"]["seed"], 0)
    groups = noise_statistics(params, int(ns["order"]), int(ns["samples"]), seed)
    term_names = list(groups[0]["terms"])
    groups_table = Table(
        "noise_groups",
        ["group", "symbol_power", "count", "variance", "expected_variance", "ks_pvalue"]
        + [f"var_{t}" for t in term_names] + ["seed", "param_hash"],
    )
    for i, g in enumerate(groups):
        groups_table.add(
            group=i, symbol_power=g["power"], count=g["count"], variance=g["variance"],
            expected_variance=g["expected"], ks_pvalue=g["ks_pvalue"], seed=seed, param_hash=digest,
            **{f"var_{t}": g["terms"][t] for t in term_names},
        )
    slope, intercept, r2, intercept_se = affine_fit([g["power"] for g in groups], [g["variance"] for g in groups])
    split = (snr_rx(params) if isinstance(params, PhotonicsLinkParams) else snr_rx_elec(params))[1]
    summary = Table("noise_summary", ["slope", "intercept", "intercept_stderr", "r_squared", "sin_w", "sdn_w",
                                      "sdn_pct", "param_hash"])
    summary.add(slope=slope, intercept=intercept, intercept_stderr=intercept_se, r_squared=r2, sin_w=split.sin, sdn_w=split.sdn,
                sdn_pct=100 * split.sdn_fraction, param_hash=digest)
    pdf = Table("noise_pdf", ["group", "symbol_power", "x", "density", "gaussian_fit"])
    for g in (groups[0], groups[-1]):
        data = g["real_part"]
        std = np.std(data)
        hist, edges = np.histogram(data, bins=int(ns["bins"]), range=(-5 * std, 5 * std), density=True)
        centres = 0.5 * (edges[1:] + edges[:-1])
        for c, h in zip(centres, hist):
            pdf.add(group=groups.index(g), symbol_power=g["power"], x=c, density=h,
                    gaussian_fit=stats.norm.pdf(c, scale=std))
    return [groups_table, summary, pdf]


# Phase noise suite ---------------------------------------------------------------------

SUITE_AXES = {"linewidth_hz": "laser", "k0_db": "rf", "k2": "rf"}


def reference_crossing(cfg, order, target):
    """Received power at which the thermal-only AWGN curve reaches ``target``."""
    base = link_params(cfg)

    def ber_at(p_rx):
        return LinkScenario(with_received_power(base, p_rx), order=order).reference_ber()

    return analytic_crossing(ber_at, target, -90.0, 10.0)


def run_phase_noise_suite(cfg):
    """BER curves per phase-noise setting with PLL tracking, and the resulting penalties.

    The baseline curve has no phase noise and no PLL; penalties are measured at
    ``suite.target_ber`` against it.
    """
    digest = param_hash(cfg)
    suite = cfg["suite"]
    axis = suite["axis"]
    if axis not in SUITE_AXES:
        raise ConfigError(f"suite axis must be one of {tuple(SUITE_AXES)}, got {axis!r}")
    target = suite["target_ber"]
    master = cfg["experiment"]["seed"]
    budget = int(cfg["experiment"]["symbols"])
    jobs, meta = [], []
    for order in cfg["signal"]["modulations"]:
        if suite["offsets_db"]:
            ref = reference_crossing(cfg, order, target)
            grid = ref + np.asarray(suite["offsets_db"], dtype=float)
        else:
            grid = sweep_values(cfg)
        settings = [("baseline", None)] + [(axis, float(v)) for v in suite["values"]]
        for label, value in settings:
            if value is None:
                overrides = {"phase_noise": "none", "pll": False}
            else:
                overrides = {"phase_noise": SUITE_AXES[axis], axis: value, "pll": True}
            for p_rx in grid:
                seed = point_seed(master, len(jobs))
                scn = scenario(cfg, order, float(p_rx), **overrides)
                jobs.append((scn, budget, seed, cfg["experiment"]["min_errors"]))
                meta.append((scn, order, float(p_rx), seed, label, value))
    results = map_points(jobs, cfg["experiment"]["workers"])
    curves = Table("phase_noise_ber", ["setting", "value"] + BER_COLUMNS)
    for (scn, order, p_rx, seed, label, value), (res, n) in zip(meta, results):
        _ber_row(curves, scn, order, p_rx, res, n, seed, digest, setting=label,
                 value="" if value is None else value)
    return [curves, penalty_table(curves, target, digest)]


def penalty_table(curves, target, digest):
    """Received-power penalty at ``target`` and the BER at the largest power per curve."""
    out = Table("phase_noise_penalty", ["modulation", "setting", "value", "p_rx_at_target_dbm",
                                        "penalty_db", "floor_ber", "floor_p_rx_dbm", "param_hash"])
    rows = curves.rows
    col = {c: i for i, c in enumerate(curves.columns)}
    keys = []
    for r in rows:
        k = (r[col["modulation"]], r[col["setting"]], r[col["value"]])
        if k not in keys:
            keys.append(k)
    base = {}
    for order, label, value in keys:
        sel = [r for r in rows if (r[col["modulation"]], r[col["setting"]], r[col["value"]]) == (order, label, value)]
        x = [r[col["p_rx_dbm"]] for r in sel]
        b = [r[col["ber"]] for r in sel]
        try:
            at = crossing(x, b, target)
        except EstimationError:
            at = float("nan")
        if label == "baseline":
            base[order] = at
        out.add(modulation=order, setting=label, value=value, p_rx_at_target_dbm=at,
                penalty_db=at - base.get(order, float("nan")), floor_ber=b[-1], floor_p_rx_dbm=x[-1],
                param_hash=digest)
    return out


# PSD ----------------------------------------------------------------------------------------

def run_psd(cfg):
    """Synthesize RF phase paths and compare their Welch PSD with the three-slope model.

    The spectrum and the 1 MHz value come from a long path at ``psd.sample_rate``.
    The white floor is read from a second path at ``psd.floor_sample_rate``, high
    enough that the ``1/f^2`` part has died out well below Nyquist.
    """
    digest = param_hash(cfg)
    ps = cfg["psd"]
    fs, fs_floor = ps["sample_rate"], ps["floor_sample_rate"]
    taps = int(ps["fir_taps"]) or None
    spectra = Table("phase_psd", ["k0_db", "k2", "k3", "frequency_hz", "psd_estimate", "psd_model", "param_hash"])
    summary = Table("phase_psd_summary", ["k0_db", "k2", "k3", "psd_1mhz_db", "model_1mhz_db",
                                          "floor_db", "floor_model_db", "seed", "param_hash"])
    index = 0
    for k0_db in ps["k0_db"]:
        for k2 in ps["k2"]:
            for k3 in ps["k3"]:
                seed = point_seed(cfg["experiment"]["seed"], index)
                index += 1
                model = RfPhaseModel.from_db(k0_db, k2, k3, tau=1 / fs, n_taps=taps)
                f, p = estimate_psd(rf_phase(model, int(ps["samples"]), np.random.SeedSequence([seed, 0])),
                                    fs, int(ps["nperseg"]))
                edges = np.geomspace(f[1], f[-1], 121)
                for lo, hi in zip(edges[:-1], edges[1:]):
                    sel = (f >= lo) & (f < hi)
                    if sel.any():
                        fc = float(np.sqrt(lo * hi))
                        spectra.add(k0_db=k0_db, k2=k2, k3=k3, frequency_hz=fc, psd_estimate=float(p[sel].mean()),
                                    psd_model=float(model.psd(fc)), param_hash=digest)
                fast = RfPhaseModel.from_db(k0_db, k2, k3, tau=1 / fs_floor, n_taps=taps)
                ff, pf = estimate_psd(rf_phase(fast, int(ps["floor_samples"]), np.random.SeedSequence([seed, 1])),
                                      fs_floor, int(ps["floor_nperseg"]))
                centre = fs_floor / 4
                summary.add(
                    k0_db=k0_db, k2=k2, k3=k3,
                    psd_1mhz_db=lin_to_db(band_average(f, p, 1e6)),
                    model_1mhz_db=lin_to_db(model.psd(1e6)),
                    floor_db=lin_to_db(band_average(ff, pf, centre, 0.5)),
                    floor_model_db=lin_to_db(fast.psd(centre)),
                    seed=seed, param_hash=digest,
                )
    return [spectra, summary]


# Validation and budget ---------------------------------------------------------------------

def run_validation(cfg):
    digest = param_hash(cfg)
    table = Table("validation", ["scenario", "model_snr_db", "reference_prediction_db", "measured_db",
                                 "delta_model_minus_measured_db", "delta_model_minus_reference_db", "param_hash"])
    for name in cfg["validation"]["scenarios"]:
        if name not in SCENARIOS:
            raise ConfigError(f"unknown validation scenario {name!r}")
        scn = SCENARIOS[name]()
        model = scn.model_snr_db()
        table.add(scenario=name, model_snr_db=model, reference_prediction_db=scn.predicted_reference_db,
                  measured_db=scn.measured_db, delta_model_minus_measured_db=model - scn.measured_db,
                  delta_model_minus_reference_db=model - scn.predicted_reference_db, param_hash=digest)
    return [table]


def run_budget(cfg):
    b = cfg["budget"]
    lb = link_budget(ChannelParams(**b))
    table = Table("budget", ["free_space_db", "atmospheric_db", "alignment_db", "antenna_db",
                             "total_loss_db", "alpha", "param_hash"])
    table.add(free_space_db=lb.free_space_db, atmospheric_db=lb.atmospheric_db, alignment_db=lb.alignment_db,
              antenna_db=lb.antenna_db, total_loss_db=-lb.net_gain_db, alpha=lb.alpha, param_hash=param_hash(cfg))
    return [table]


EXPERIMENTS = {
    "snr-sweep": run_snr_sweep,
    "ber-sweep": run_ber_sweep,
    "noise-stats": run_noise_stats,
    "phase-noise-suite": run_phase_noise_suite,
    "psd": run_psd,
    "validate": run_validation,
    "budget": run_budget,
}
