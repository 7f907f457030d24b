"""Time-of-use contracts, per-interval price series, and billing.

A contract compiles, together with a calendar, into a pair of per-interval
price vectors: what a kWh imported from the grid costs (energy rate plus
variable distribution plus surcharges) and what a kWh injected earns (the
injection rate alone; distribution and surcharges are only levied on
consumption). Dual-rate contracts apply night rates from 22:00 to 07:00 and
on whole weekend days and public holidays.

Billing adds the time-proportional fixed components: annual fee, fixed
distribution (yearly plus monthly parts), and the prosumer tax proportional
to inverter kVA where the contract levies one.
"""

from __future__ import annotations

import datetime as dt
import enum
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
import yaml

from .errors import ConfigError

NIGHT_START_HOUR = 22
NIGHT_END_HOUR = 7
MINUTES_PER_DAY = 24 * 60


class ContractId(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"


@dataclass(frozen=True)
class Contract:
    """Billing ruleset. Energy-like rates are stored in euro-cents per kWh as
    published; use the ``*_eur_per_kwh`` helpers for billing arithmetic."""

    id: ContractId
    fixed_charge_eur_per_year: float
    day_rate_c_per_kwh: float
    night_rate_c_per_kwh: float
    injection_day_c_per_kwh: float
    injection_night_c_per_kwh: float
    prosumer_tax_eur_per_kw_year: float
    fixed_distribution_eur_per_year: float
    fixed_distribution_eur_per_month: float
    var_distribution_day_c_per_kwh: float
    var_distribution_night_c_per_kwh: float
    surcharges_c_per_kwh: tuple[float, ...]
    description: str = ""

    def buy_eur_per_kwh(self, night: bool) -> float:
        energy = self.night_rate_c_per_kwh if night else self.day_rate_c_per_kwh
        distribution = self.var_distribution_night_c_per_kwh if night else self.var_distribution_day_c_per_kwh
        return (energy + distribution + sum(self.surcharges_c_per_kwh)) / 100.0

    def sell_eur_per_kwh(self, night: bool) -> float:
        return (self.injection_night_c_per_kwh if night else self.injection_day_c_per_kwh) / 100.0

    def annual_fixed_eur(self, inverter_kva: float = 0.0) -> float:
        return (
            self.fixed_charge_eur_per_year
            + self.fixed_distribution_eur_per_year
            + 12.0 * self.fixed_distribution_eur_per_month
            + self.prosumer_tax_eur_per_kw_year * inverter_kva
        )


@dataclass(frozen=True)
class PriceSeries:
    """Per-interval buy/sell prices (EUR/kWh) aligned with timestamps."""

    timestamps: pd.DatetimeIndex
    interval: dt.timedelta
    buy: np.ndarray
    sell: np.ndarray
    is_night: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.timestamps)
        if not (len(self.buy) == len(self.sell) == len(self.is_night) == n):
            raise ConfigError("price series arrays must have equal length")

    def __len__(self) -> int:
        return len(self.buy)

    @property
    def interval_hours(self) -> float:
        return self.interval.total_seconds() / 3600.0

    @property
    def intervals_per_day(self) -> int:
        return round(dt.timedelta(days=1) / self.interval)

    def islice(self, start: int, stop: int) -> "PriceSeries":
        return PriceSeries(
            timestamps=self.timestamps[start:stop],
            interval=self.interval,
            buy=self.buy[start:stop],
            sell=self.sell[start:stop],
            is_night=self.is_night[start:stop],
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "timestamp": self.timestamps,
                "buy_eur_per_kwh": self.buy,
                "sell_eur_per_kwh": self.sell,
                "is_night": self.is_night,
            }
        )


def _easter_sunday(year: int) -> dt.date:
    # Anonymous Gregorian computus (Meeus/Jones/Butcher).
    a = year % 19
    b, c = divmod(year, 100)
    d, e = divmod(b, 4)
    f = (b + 8) // 25
    g = (b - f + 1) // 3
    h = (19 * a + b - d - g + 15) % 30
    i, k = divmod(c, 4)
    l = (32 + 2 * e + 2 * i - h - k) % 7
    m = (a + 11 * h + 22 * l) // 451
    month, day = divmod(h + l - 7 * m + 114, 31)
    return dt.date(year, month, day + 1)


def belgian_holidays(year: int) -> frozenset[dt.date]:
    """The ten Belgian public holidays of a year."""
    easter = _easter_sunday(year)
    return frozenset(
        {
            dt.date(year, 1, 1),  # New Year's Day
            easter + dt.timedelta(days=1),  # Easter Monday
            dt.date(year, 5, 1),  # Labour Day
            easter + dt.timedelta(days=39),  # Ascension
            easter + dt.timedelta(days=50),  # Whit Monday
            dt.date(year, 7, 21),  # National Day
            dt.date(year, 8, 15),  # Assumption
            dt.date(year, 11, 1),  # All Saints
            dt.date(year, 11, 11),  # Armistice Day
            dt.date(year, 12, 25),  # Christmas
        }
    )


def night_flags(timestamps: pd.DatetimeIndex, holidays: Iterable[dt.date] = ()) -> np.ndarray:
    """Night classification per interval start: 22:00-07:00, weekends, holidays."""
    hours = timestamps.hour.to_numpy()
    window = (hours >= NIGHT_START_HOUR) | (hours < NIGHT_END_HOUR)
    weekend = timestamps.weekday.to_numpy() >= 5
    holiday_set = set(holidays)
    if holiday_set:
        dates = timestamps.date
        holiday = np.array([d in holiday_set for d in dates], dtype=bool)
    else:
        holiday = np.zeros(len(timestamps), dtype=bool)
    return window | weekend | holiday


def build_price_series(
    contract: Contract,
    start: dt.date,
    days: int,
    interval_minutes: int = 15,
    holidays: Iterable[dt.date] = (),
) -> PriceSeries:
    """Compile a contract over a date range into per-interval prices.

    Each interval is classified by its start instant; the buy price stacks the
    energy rate, variable distribution and surcharges for that window, the
    sell price is the window's injection rate.
    """
    if interval_minutes <= 0 or MINUTES_PER_DAY % interval_minutes != 0:
        raise ConfigError(f"interval of {interval_minutes} minutes does not divide a day")
    if days <= 0:
        raise ConfigError("date range must cover at least one day")
    per_day = MINUTES_PER_DAY // interval_minutes
    timestamps = pd.date_range(
        start=pd.Timestamp(start), periods=days * per_day, freq=pd.Timedelta(minutes=interval_minutes)
    )
    night = night_flags(timestamps, holidays)
    buy = np.where(night, contract.buy_eur_per_kwh(True), contract.buy_eur_per_kwh(False))
    sell = np.where(night, contract.sell_eur_per_kwh(True), contract.sell_eur_per_kwh(False))
    return PriceSeries(
        timestamps=timestamps,
        interval=dt.timedelta(minutes=interval_minutes),
        buy=buy,
        sell=sell,
        is_night=night,
    )


def price_series_for_year(
    contract: Contract,
    year: int,
    interval_minutes: int = 15,
    holidays: Iterable[dt.date] | None = None,
) -> PriceSeries:
    """Full-calendar-year series; holidays default to the Belgian public ones."""
    if holidays is None:
        holidays = belgian_holidays(year)
    days = (dt.date(year + 1, 1, 1) - dt.date(year, 1, 1)).days
    return build_price_series(contract, dt.date(year, 1, 1), days, interval_minutes, holidays)


def bill_period(
    series: PriceSeries,
    import_kwh: Sequence[float] | np.ndarray,
    export_kwh: Sequence[float] | np.ndarray,
    contract: Contract,
    inverter_kva: float = 0.0,
    duration_years: float = 1.0,
) -> float:
    """Cost of a metered period: variable part from the series, fixed part
    prorated by `duration_years`."""
    imports = np.asarray(import_kwh, dtype=float)
    exports = np.asarray(export_kwh, dtype=float)
    if len(imports) != len(series) or len(exports) != len(series):
        raise ConfigError(
            f"metered series length mismatch: {len(imports)}/{len(exports)} values for {len(series)} intervals"
        )
    if np.any(imports < 0):
        raise ConfigError(f"negative import energy at interval {int(np.argmax(imports < 0))}")
    if np.any(exports < 0):
        raise ConfigError(f"negative export energy at interval {int(np.argmax(exports < 0))}")
    variable = float(series.buy @ imports - series.sell @ exports)
    return variable + duration_years * contract.annual_fixed_eur(inverter_kva)


_REQUIRED_CONTRACT_KEYS = (
    "fixed_charge_eur_per_year",
    "day_rate_c_per_kwh",
    "night_rate_c_per_kwh",
    "injection_day_c_per_kwh",
    "injection_night_c_per_kwh",
    "prosumer_tax_eur_per_kw_year",
    "fixed_distribution_eur_per_year",
    "fixed_distribution_eur_per_month",
    "var_distribution_day_c_per_kwh",
    "var_distribution_night_c_per_kwh",
    "surcharges_c_per_kwh",
)


def _parse_contract(cid: str, entry: Mapping) -> Contract:
    try:
        contract_id = ContractId(cid)
    except ValueError:
        raise ConfigError(f"unknown contract id {cid!r}; expected one of C1..C4") from None
    missing = [k for k in _REQUIRED_CONTRACT_KEYS if k not in entry]
    if missing:
        raise ConfigError(f"contract {cid}: missing keys {missing}")
    surcharges = tuple(float(s) for s in entry["surcharges_c_per_kwh"])
    kwargs = {k: float(entry[k]) for k in _REQUIRED_CONTRACT_KEYS if k != "surcharges_c_per_kwh"}
    contract = Contract(
        id=contract_id,
        surcharges_c_per_kwh=surcharges,
        description=str(entry.get("description", "")),
        **kwargs,
    )
    for name in _REQUIRED_CONTRACT_KEYS[:-1]:
        if getattr(contract, name) < 0:
            raise ConfigError(f"contract {cid}: {name} must be >= 0")
    if any(s < 0 for s in surcharges):
        raise ConfigError(f"contract {cid}: surcharges must be >= 0")
    return contract


def load_contracts(source: str | Path | Mapping | None = None) -> dict[ContractId, Contract]:
    """Load the contract table from YAML or the bundled defaults."""
    if source is None:
        text = resources.files("pvpayback.data").joinpath("contracts.yaml").read_text(encoding="utf-8")
        doc = yaml.safe_load(text)
    elif isinstance(source, Mapping):
        doc = source
    else:
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"contracts file not found: {path}")
        try:
            doc = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ConfigError(f"contracts file {path} is not valid YAML: {exc}") from exc
    entries = doc.get("contracts") if isinstance(doc, Mapping) else None
    if not isinstance(entries, Mapping) or not entries:
        raise ConfigError("contracts document must contain a non-empty 'contracts' mapping")
    return {ContractId(cid): _parse_contract(cid, entry) for cid, entry in entries.items()}


def default_contract(contract_id: ContractId | str = ContractId.C3) -> Contract:
    return load_contracts(None)[ContractId(contract_id)]


def with_scaled_rates(contract: Contract, factor: float) -> Contract:
    """A copy of the contract with every per-kWh rate scaled (what-if tool)."""
    return replace(
        contract,
        day_rate_c_per_kwh=contract.day_rate_c_per_kwh * factor,
        night_rate_c_per_kwh=contract.night_rate_c_per_kwh * factor,
        injection_day_c_per_kwh=contract.injection_day_c_per_kwh * factor,
        injection_night_c_per_kwh=contract.injection_night_c_per_kwh * factor,
        var_distribution_day_c_per_kwh=contract.var_distribution_day_c_per_kwh * factor,
        var_distribution_night_c_per_kwh=contract.var_distribution_night_c_per_kwh * factor,
        surcharges_c_per_kwh=tuple(s * factor for s in contract.surcharges_c_per_kwh),
    )
