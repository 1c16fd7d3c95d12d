"""Scenario description and the deterministic power quantities derived from it.

All powers are linear inside the library; dB appears only at the JSON/CLI
boundary (keys with an explicit ``_db`` suffix) and in figure output.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

SINGLE_CARRIER = "sc"
OFDM = "ofdm"
WAVEFORMS = (SINGLE_CARRIER, OFDM)

MRC = "mrc"
ZFC = "zfc"
RZFC = "rzfc"
COMBINERS = (MRC, ZFC, RZFC)


class ConfigError(ValueError):
    """Raised by validate() with the list of violated invariants."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def db_to_lin(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def lin_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class PowerDelayProfile:
    """Per-tap variance profile p[0..L-1]; entries are nonnegative and sum to 1."""

    taps: tuple

    @property
    def num_taps(self) -> int:
        return len(self.taps)

    def problems(self) -> list:
        out = []
        if len(self.taps) == 0:
            out.append("BadProfile: profile has no taps")
            return out
        if any(p < 0 for p in self.taps):
            out.append("BadProfile: negative tap power")
        if abs(sum(self.taps) - 1.0) > 1e-12:
            out.append(f"BadProfile: tap powers sum to {sum(self.taps)!r}, not 1")
        return out


def make_uniform_pdp(num_taps: int) -> PowerDelayProfile:
    """Uniform profile p[l] = 1/L."""
    if num_taps < 1:
        raise ConfigError(["BadProfile: need at least one tap"])
    return PowerDelayProfile(taps=(1.0 / num_taps,) * num_taps)


def make_exponential_pdp(num_taps: int, decay: float) -> PowerDelayProfile:
    """Exponentially decaying profile p[l] ~ exp(-l/decay), renormalized to sum 1."""
    if num_taps < 1:
        raise ConfigError(["BadProfile: need at least one tap"])
    if decay <= 0:
        raise ConfigError(["BadProfile: decay must be positive"])
    raw = [math.exp(-l / decay) for l in range(num_taps)]
    total = sum(raw)
    return PowerDelayProfile(taps=tuple(p / total for p in raw))


@dataclass(frozen=True)
class UserLinkBudget:
    """Large-scale gain and transmit power of one user, both linear."""

    beta: float = 1.0
    power: float = 1.0

    @property
    def rx_power(self) -> float:
        return self.beta * self.power

    def snr(self, noise_floor: float) -> float:
        return self.rx_power / noise_floor


@dataclass(frozen=True)
class SystemConfig:
    """Everything that defines one simulated scenario.

    Immutable after validation; safe to share across Monte-Carlo workers.
    The pilot excess factor mu = pilot_len/(K*L) is implied by pilot_len, so
    only integer-feasible pilot lengths can be expressed.

    Note on coherence time: pilots and data must fit one coherence interval
    (roughly 1/(doppler_spread * symbol_time) symbols), which bounds feasible
    pilot lengths in practice.  That is an engineering budget, not a model
    invariant, so it is not validated here.
    """

    antennas: int
    users: tuple  # of UserLinkBudget
    pdp: PowerDelayProfile
    noise_floor: float = 1.0
    pilot_len: int = 0
    data_len: int = 0
    waveform: str = SINGLE_CARRIER
    combiner: str = MRC
    rzfc_lambda: float | None = None
    quantized: bool = True
    seed: int = 0

    @property
    def num_users(self) -> int:
        return len(self.users)

    @property
    def num_taps(self) -> int:
        return self.pdp.num_taps

    @property
    def pilot_excess_factor(self) -> float:
        return self.pilot_len / (self.num_users * self.num_taps)

    @property
    def rx_powers(self) -> tuple:
        return tuple(u.rx_power for u in self.users)

    @property
    def snrs_db(self) -> tuple:
        return tuple(lin_to_db(u.snr(self.noise_floor)) for u in self.users)


def equal_snr_config(antennas, num_users, num_taps, snr_db, *,
                     noise_floor=1.0, pilot_excess=1, data_len=512,
                     waveform=SINGLE_CARRIER, combiner=MRC, rzfc_lambda=None,
                     quantized=True, seed=0) -> SystemConfig:
    """Convenience constructor for the equal-power, uniform-profile scenarios."""
    rx = noise_floor * db_to_lin(snr_db)
    users = tuple(UserLinkBudget(beta=rx, power=1.0) for _ in range(num_users))
    return validate(SystemConfig(
        antennas=antennas, users=users, pdp=make_uniform_pdp(num_taps),
        noise_floor=noise_floor, pilot_len=pilot_excess * num_users * num_taps,
        data_len=data_len, waveform=waveform, combiner=combiner,
        rzfc_lambda=rzfc_lambda, quantized=quantized, seed=seed))


def mean_rx_power(config: SystemConfig) -> float:
    """Average received power per antenna: N0 + sum_k beta_k P_k.

    Invariant under permutations of the user list.
    """
    return config.noise_floor + sum(u.rx_power for u in config.users)


def validation_errors(config: SystemConfig) -> list:
    """All violated invariants, by name; empty list when the config is valid."""
    k = config.num_users
    num_taps = config.pdp.num_taps
    out = list(config.pdp.problems())
    if k == 0:
        out.append("NoUsers: at least one user required")
    for i, u in enumerate(config.users):
        if u.beta <= 0 or u.power <= 0:
            out.append(f"BadLinkBudget: user {i} needs beta > 0 and power > 0")
    if config.noise_floor < 0:
        out.append("BadNoiseFloor: noise_floor must be nonnegative")
    if config.antennas < 1:
        out.append("NoAntennas: antennas must be positive")
    if k > 0 and num_taps > 0:
        if config.pilot_len < k * num_taps:
            out.append(f"PilotTooShort: pilot_len {config.pilot_len} < K*L = {k * num_taps}")
        if k > 0 and config.pilot_len % k != 0:
            out.append(f"PilotNotCombAligned: pilot_len {config.pilot_len} not a multiple of K = {k}")
    if config.data_len < num_taps:
        out.append(f"DataBlockTooShort: data_len {config.data_len} < L = {num_taps}")
    if config.waveform not in WAVEFORMS:
        out.append(f"BadWaveform: {config.waveform!r}")
    if config.combiner not in COMBINERS:
        out.append(f"BadCombiner: {config.combiner!r}")
    if config.combiner in (ZFC, RZFC) and config.antennas < k:
        out.append(f"TooFewAntennas: {config.combiner} needs M >= K, got M={config.antennas}, K={k}")
    if config.combiner == RZFC and config.rzfc_lambda is not None and config.rzfc_lambda < 0:
        out.append("BadRegularizer: rzfc_lambda must be nonnegative")
    return out


def validate(config: SystemConfig) -> SystemConfig:
    problems = validation_errors(config)
    if problems:
        raise ConfigError(problems)
    return config


def default_rzfc_lambda(config: SystemConfig, rel_distortion_limit: float) -> float:
    """Regularizer K*(N0 + Q')/sum_k beta_k P_k, the MMSE-style choice.

    The regularized combiner's lambda is a free design parameter; this default
    balances array gain against interference suppression at the operating
    noise-plus-distortion level.
    """
    total_rx = sum(config.rx_powers)
    return config.num_users * (config.noise_floor + rel_distortion_limit) / total_rx


def _resolve_db(entry: dict, key: str, default=None):
    """Fetch entry[key], honoring an explicit '<key>_db' variant."""
    if f"{key}_db" in entry:
        return db_to_lin(entry[f"{key}_db"])
    if key in entry:
        return entry[key]
    return default


def _pdp_from_json(obj) -> PowerDelayProfile:
    if isinstance(obj, (list, tuple)):
        return PowerDelayProfile(taps=tuple(float(p) for p in obj))
    kind = obj.get("kind", "uniform")
    if kind == "uniform":
        return make_uniform_pdp(int(obj["taps"]))
    if kind == "exponential":
        return make_exponential_pdp(int(obj["taps"]), float(obj["decay"]))
    raise ConfigError([f"BadProfile: unknown pdp kind {kind!r}"])


def config_from_dict(doc: dict) -> SystemConfig:
    """Build and validate a SystemConfig from a JSON-style dict.

    Power-like values accept an explicit dB form via a '_db' key suffix
    (noise_floor_db, beta_db, power_db, snr_db).  A user given as
    {"snr_db": v} gets beta = N0 * 10^(v/10) and unit transmit power.
    """
    noise = float(_resolve_db(doc, "noise_floor", 1.0))
    users = []
    for entry in doc["users"]:
        if "snr_db" in entry and "beta" not in entry and "beta_db" not in entry:
            users.append(UserLinkBudget(beta=noise * db_to_lin(entry["snr_db"]),
                                        power=float(_resolve_db(entry, "power", 1.0))))
        else:
            users.append(UserLinkBudget(beta=float(_resolve_db(entry, "beta", 1.0)),
                                        power=float(_resolve_db(entry, "power", 1.0))))
    cfg = SystemConfig(
        antennas=int(doc["antennas"]),
        users=tuple(users),
        pdp=_pdp_from_json(doc["pdp"]),
        noise_floor=noise,
        pilot_len=int(doc["pilot_len"]),
        data_len=int(doc["data_len"]),
        waveform=doc.get("waveform", SINGLE_CARRIER),
        combiner=doc.get("combiner", MRC),
        rzfc_lambda=doc.get("rzfc_lambda"),
        quantized=bool(doc.get("quantized", True)),
        seed=int(doc.get("seed", 0)),
    )
    return validate(cfg)


def config_from_json(path) -> SystemConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def config_to_dict(config: SystemConfig) -> dict:
    return {
        "antennas": config.antennas,
        "users": [{"beta": u.beta, "power": u.power} for u in config.users],
        "pdp": list(config.pdp.taps),
        "noise_floor": config.noise_floor,
        "pilot_len": config.pilot_len,
        "data_len": config.data_len,
        "waveform": config.waveform,
        "combiner": config.combiner,
        "rzfc_lambda": config.rzfc_lambda,
        "quantized": config.quantized,
        "seed": config.seed,
    }


def with_overrides(config: SystemConfig, **kw) -> SystemConfig:
    return validate(replace(config, **kw))
