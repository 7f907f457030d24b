"""One-time installation subsidies and net investment after subsidy.

PV and battery grants are piecewise linear in installed size with flat
regions beyond 6 kWp and 9 kWh respectively; the combined grant is capped at
a fraction (40%) of the gross system cost. Amounts are rounded to whole
cents, matching how grants are paid out.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Literal, Mapping

import yaml

from .errors import ConfigError
from .scenario import Scenario

PV_TIER1_LIMIT_KWP = 4.0
PV_TIER2_LIMIT_KWP = 6.0

CapMode = Literal["combined", "per_technology"]


@dataclass(frozen=True)
class BatteryTier:
    up_to_kwh: float
    rate_eur_per_kwh: float


@dataclass(frozen=True)
class SubsidySchedule:
    year: int
    pv_tier1_eur_per_kwp: float
    pv_tier2_eur_per_kwp: float
    pv_max_eur: float
    battery_tiers: tuple[BatteryTier, ...]
    battery_max_eur: float
    cap_fraction: float = 0.40


def pv_subsidy(pv_kwp: float, schedule: SubsidySchedule) -> float:
    """Grant for the PV part alone: tier-1 rate up to 4 kWp, tier-2 rate from
    4 to 6 kWp, nothing beyond, never more than the schedule maximum."""
    if pv_kwp < 0:
        raise ConfigError(f"pv size must be >= 0, got {pv_kwp}")
    amount = schedule.pv_tier1_eur_per_kwp * min(pv_kwp, PV_TIER1_LIMIT_KWP)
    amount += schedule.pv_tier2_eur_per_kwp * max(0.0, min(pv_kwp, PV_TIER2_LIMIT_KWP) - PV_TIER1_LIMIT_KWP)
    return round(min(amount, schedule.pv_max_eur), 2)


def battery_subsidy(capacity_kwh: float, schedule: SubsidySchedule) -> float:
    """Grant for the battery part alone: per-kWh rates over the schedule's
    brackets, flat beyond the last bracket bound."""
    if capacity_kwh < 0:
        raise ConfigError(f"battery capacity must be >= 0, got {capacity_kwh}")
    amount = 0.0
    lower = 0.0
    for tier in schedule.battery_tiers:
        span = max(0.0, min(capacity_kwh, tier.up_to_kwh) - lower)
        amount += tier.rate_eur_per_kwh * span
        lower = tier.up_to_kwh
    return round(min(amount, schedule.battery_max_eur), 2)


def total_subsidy(scenario: Scenario, schedule: SubsidySchedule, cap_mode: CapMode = "combined") -> float:
    """Combined grant for a configuration, after the investment-cost cap.

    `cap_mode="combined"` (default) caps the summed PV+battery grant at
    `cap_fraction` of the whole-system gross cost, inverter included.
    `"per_technology"` caps each grant at the fraction of its own component
    cost, inverter excluded (the alternative reading of the rule, kept
    testable).
    """
    pv_part = pv_subsidy(scenario.pv_kwp, schedule)
    battery_part = battery_subsidy(scenario.battery_kwh, schedule)
    if cap_mode == "combined":
        return round(min(pv_part + battery_part, schedule.cap_fraction * scenario.gross_cost_eur), 2)
    if cap_mode == "per_technology":
        battery_cost = scenario.battery.price_eur if scenario.battery else 0.0
        panel_cost = scenario.gross_cost_eur - scenario.inverter.price_eur - battery_cost
        capped_pv = min(pv_part, schedule.cap_fraction * panel_cost)
        capped_battery = min(battery_part, schedule.cap_fraction * battery_cost)
        return round(capped_pv + capped_battery, 2)
    raise ConfigError(f"unknown cap_mode {cap_mode!r}")


def net_investment(scenario: Scenario, schedule: SubsidySchedule, cap_mode: CapMode = "combined") -> float:
    """Gross system cost minus the capped subsidy."""
    return round(scenario.gross_cost_eur - total_subsidy(scenario, schedule, cap_mode), 2)


def _parse_schedule(index: int, entry: Mapping) -> SubsidySchedule:
    try:
        year = int(entry["year"])
        pv = entry["pv"]
        battery = entry["battery"]
        tiers = tuple(
            BatteryTier(up_to_kwh=float(t["up_to_kwh"]), rate_eur_per_kwh=float(t["rate_eur_per_kwh"]))
            for t in battery["tiers"]
        )
        schedule = SubsidySchedule(
            year=year,
            pv_tier1_eur_per_kwp=float(pv["tier1_eur_per_kwp"]),
            pv_tier2_eur_per_kwp=float(pv["tier2_eur_per_kwp"]),
            pv_max_eur=float(pv["max_eur"]),
            battery_tiers=tiers,
            battery_max_eur=float(battery["max_eur"]),
            cap_fraction=float(entry.get("cap_fraction", 0.40)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"schedules[{index}]: malformed entry ({exc})") from exc
    if any(r < 0 for r in (schedule.pv_tier1_eur_per_kwp, schedule.pv_tier2_eur_per_kwp, schedule.pv_max_eur)):
        raise ConfigError(f"schedules[{index}]: PV rates must be >= 0")
    bounds = [t.up_to_kwh for t in schedule.battery_tiers]
    if bounds != sorted(set(bounds)) or any(t.rate_eur_per_kwh < 0 for t in schedule.battery_tiers):
        raise ConfigError(f"schedules[{index}]: battery tiers must have increasing bounds and rates >= 0")
    if not 0 < schedule.cap_fraction <= 1:
        raise ConfigError(f"schedules[{index}]: cap_fraction must lie in (0, 1]")
    return schedule


def load_schedules(source: str | Path | Mapping | None = None) -> dict[int, SubsidySchedule]:
    """Load subsidy schedules keyed by commissioning year from YAML or the
    bundled defaults."""
    if source is None:
        text = resources.files("pvpayback.data").joinpath("subsidies.yaml").read_text(encoding="utf-8")
        doc = yaml.safe_load(text)
    elif isinstance(source, Mapping):
        doc = source
    else:
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"subsidy schedule file not found: {path}")
        try:
            doc = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ConfigError(f"subsidy file {path} is not valid YAML: {exc}") from exc
    entries = doc.get("schedules") if isinstance(doc, Mapping) else None
    if not entries:
        raise ConfigError("subsidy document must contain a non-empty 'schedules' list")
    schedules = {}
    for i, entry in enumerate(entries):
        schedule = _parse_schedule(i, entry)
        if schedule.year in schedules:
            raise ConfigError(f"schedules[{i}]: duplicate year {schedule.year}")
        schedules[schedule.year] = schedule
    return schedules
