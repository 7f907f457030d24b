"""Enumeration of admissible PV / battery / inverter combinations.

PV sizes are integer multiples of the generation panel up to a cap. Each
combination is paired with every inverter of the applicable family whose kVA
rating falls inside a band around the combined rated power; when the band
misses the product range entirely, the nearest end of the range is admitted
instead (smallest inverter below the range, largest above it).

Band comparisons run on exact decimal arithmetic (`fractions.Fraction`) so a
rating that lands precisely on a band edge is admitted deterministically,
immune to float rounding.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .catalog import BatterySpec, InverterFamily, InverterSpec, ProductCatalog

DEFAULT_PV_CAP_KWP = 6.0
DEFAULT_BAND_LOW = 0.55
DEFAULT_BAND_HIGH = 1.1


@dataclass(frozen=True)
class Scenario:
    """One admissible configuration with its gross (pre-subsidy) cost."""

    id: int
    pv_kwp: float
    panel_count: int
    battery: BatterySpec | None
    inverter: InverterSpec
    gross_cost_eur: float

    @property
    def battery_kwh(self) -> float:
        return self.battery.capacity_kwh if self.battery else 0.0

    @property
    def pv_inverter_ratio(self) -> float:
        return self.pv_kwp / self.inverter.kva_rating

    @property
    def has_battery(self) -> bool:
        return self.battery is not None


def _dec(x: float) -> Fraction:
    # repr() of a float is its shortest round-tripping decimal, which for
    # catalogue data is the intended decimal value (0.325, 3.68, ...).
    return Fraction(repr(float(x)))


def _admissible_inverters(
    inverters: tuple[InverterSpec, ...],
    rated_sum: Fraction,
    band_low: Fraction,
    band_high: Fraction,
) -> list[InverterSpec]:
    lo = band_low * rated_sum
    hi = band_high * rated_sum
    within = [inv for inv in inverters if lo <= _dec(inv.kva_rating) <= hi]
    if within:
        return within
    smallest = min(inverters, key=lambda inv: inv.kva_rating)
    largest = max(inverters, key=lambda inv: inv.kva_rating)
    if hi < _dec(smallest.kva_rating):
        return [smallest]
    if lo > _dec(largest.kva_rating):
        return [largest]
    return []  # band falls in a gap between products; nothing admissible


def enumerate_scenarios(
    catalog: ProductCatalog,
    pv_cap_kwp: float = DEFAULT_PV_CAP_KWP,
    band_low: float = DEFAULT_BAND_LOW,
    band_high: float = DEFAULT_BAND_HIGH,
) -> list[Scenario]:
    """All admissible configurations, ids assigned in deterministic order
    (ascending PV size, then battery capacity, then inverter rating).

    Battery power counts into the rated-power sum at its c-rate (1C makes kW
    equal kWh). The empty configuration (no PV, no battery) is excluded.
    Battery-present combinations use hybrid inverters, PV-only combinations
    solar inverters.
    """
    if not band_low < band_high:
        raise ValueError(f"band_low must be < band_high, got {band_low} >= {band_high}")
    if pv_cap_kwp <= 0:
        raise ValueError(f"pv_cap_kwp must be > 0, got {pv_cap_kwp}")

    panel = catalog.generation_panel()
    panel_size = _dec(panel.peak_power_kwp)
    lo = _dec(band_low)
    hi = _dec(band_high)
    max_panels = int(_dec(pv_cap_kwp) / panel_size)  # floor division on Fractions

    battery_choices: list[BatterySpec | None] = [None] + sorted(
        catalog.batteries, key=lambda b: b.capacity_kwh
    )

    scenarios: list[Scenario] = []
    next_id = 1
    for n_panels in range(0, max_panels + 1):
        pv_frac = n_panels * panel_size
        for battery in battery_choices:
            if n_panels == 0 and battery is None:
                continue
            if battery is None:
                family = InverterFamily.SOLAR
                rated_sum = pv_frac
            else:
                family = InverterFamily.HYBRID
                rated_sum = pv_frac + _dec(battery.capacity_kwh) * _dec(battery.c_rate_discharge)
            for inverter in sorted(
                _admissible_inverters(catalog.inverters(family), rated_sum, lo, hi),
                key=lambda inv: inv.kva_rating,
            ):
                gross = n_panels * panel.unit_price_eur + inverter.price_eur
                if battery is not None:
                    gross += battery.price_eur
                scenarios.append(
                    Scenario(
                        id=next_id,
                        pv_kwp=float(pv_frac),
                        panel_count=n_panels,
                        battery=battery,
                        inverter=inverter,
                        gross_cost_eur=gross,
                    )
                )
                next_id += 1
    return scenarios


def worst_case_count(catalog: ProductCatalog, pv_cap_kwp: float = DEFAULT_PV_CAP_KWP) -> int:
    """Unpruned combination count: PV sizes (incl. zero) x battery choices
    (incl. none) x inverter sizes per family."""
    panel = catalog.generation_panel()
    pv_choices = int(_dec(pv_cap_kwp) / _dec(panel.peak_power_kwp)) + 1
    battery_choices = len(catalog.batteries) + 1
    inverter_sizes = max(len(catalog.solar_inverters), len(catalog.hybrid_inverters))
    return pv_choices * battery_choices * inverter_sizes


CSV_COLUMNS = ("id", "pv_kwp", "battery_kwh", "inverter_kva", "inverter_family", "gross_cost_eur")


def scenarios_to_csv(scenarios: list[Scenario], path: str | Path | None = None) -> str:
    """Render the scenario list as CSV; writes to `path` when given and
    returns the CSV text either way."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in scenarios:
        writer.writerow(
            [
                s.id,
                f"{s.pv_kwp:.3f}",
                f"{s.battery_kwh:.1f}" if s.battery else "",
                f"{s.inverter.kva_rating:g}",
                s.inverter.family.value,
                f"{s.gross_cost_eur:.2f}",
            ]
        )
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def find_scenario(scenarios: list[Scenario], scenario_id: int) -> Scenario:
    for s in scenarios:
        if s.id == scenario_id:
            return s
    raise KeyError(f"no scenario with id {scenario_id}")


def band_window(scenario: Scenario, band_low: float = DEFAULT_BAND_LOW, band_high: float = DEFAULT_BAND_HIGH) -> tuple[float, float]:
    """The [low, high] kVA window the scenario's inverter was checked against."""
    rated = _dec(scenario.pv_kwp)
    if scenario.battery is not None:
        rated += _dec(scenario.battery.capacity_kwh) * _dec(scenario.battery.c_rate_discharge)
    return float(_dec(band_low) * rated), float(_dec(band_high) * rated)


def reduction_ratio(catalog: ProductCatalog, **kwargs) -> float:
    """Fraction of the worst-case combination space removed by the sizing rules."""
    emitted = len(enumerate_scenarios(catalog, **kwargs))
    worst = worst_case_count(catalog, kwargs.get("pv_cap_kwp", DEFAULT_PV_CAP_KWP))
    return 1.0 - emitted / worst
