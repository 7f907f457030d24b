"""Product catalogue with typed lookups.

The catalogue holds the four price tables (PV panels, home batteries, solar
inverters, hybrid inverters) that all sizing and costing reads from. It is
loaded from a YAML document so the product range is data, not code, and can
be swapped for a different market survey without touching the engine.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ConfigError, MissingProductError

DEFAULT_ETA_CHARGE = 0.95
DEFAULT_ETA_DISCHARGE = 0.95
DEFAULT_SOC_MIN_FRACTION = 0.10
DEFAULT_C_RATE = 1.0
DEFAULT_INVERTER_EFFICIENCY = 0.98


class InverterFamily(str, enum.Enum):
    """Solar inverters convert DC to AC only; hybrid inverters are
    bidirectional and can charge a battery from the AC side."""

    SOLAR = "solar"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class PanelSpec:
    peak_power_kwp: float
    unit_price_eur: float
    #: marks the panel whose integer multiples form the PV size axis
    generation_default: bool = False

    @property
    def price_per_kwp(self) -> float:
        return self.unit_price_eur / self.peak_power_kwp


@dataclass(frozen=True)
class BatterySpec:
    capacity_kwh: float
    price_eur: float
    eta_charge: float = DEFAULT_ETA_CHARGE
    eta_discharge: float = DEFAULT_ETA_DISCHARGE
    soc_min_fraction: float = DEFAULT_SOC_MIN_FRACTION
    c_rate_charge: float = DEFAULT_C_RATE
    c_rate_discharge: float = DEFAULT_C_RATE
    #: datasheet value, kept for reference; the power model uses the c-rates
    max_charge_current_a: float | None = None

    @property
    def soc_max_kwh(self) -> float:
        return self.capacity_kwh

    @property
    def soc_min_kwh(self) -> float:
        return self.soc_min_fraction * self.capacity_kwh

    @property
    def charge_power_kw(self) -> float:
        return self.capacity_kwh * self.c_rate_charge

    @property
    def discharge_power_kw(self) -> float:
        return self.capacity_kwh * self.c_rate_discharge

    @property
    def price_per_kwh(self) -> float:
        return self.price_eur / self.capacity_kwh


@dataclass(frozen=True)
class InverterSpec:
    kva_rating: float
    price_eur: float
    family: InverterFamily
    efficiency: float = DEFAULT_INVERTER_EFFICIENCY


@dataclass(frozen=True)
class ProductCatalog:
    panels: tuple[PanelSpec, ...]
    batteries: tuple[BatterySpec, ...]
    solar_inverters: tuple[InverterSpec, ...]
    hybrid_inverters: tuple[InverterSpec, ...]
    version: str = "unversioned"

    def inverters(self, family: InverterFamily | str) -> tuple[InverterSpec, ...]:
        family = InverterFamily(family)
        if family is InverterFamily.SOLAR:
            return self.solar_inverters
        return self.hybrid_inverters

    def generation_panel(self) -> PanelSpec:
        """The panel whose multiples define the PV size axis."""
        flagged = [p for p in self.panels if p.generation_default]
        if len(flagged) != 1:
            raise ConfigError(
                f"catalog must flag exactly one panel as generation_default, found {len(flagged)}"
            )
        return flagged[0]


def _positive(section: str, index: int, key: str, value: Any) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}[{index}]: {key} must be a number, got {value!r}") from None
    if value <= 0:
        raise ConfigError(f"{section}[{index}]: {key} must be > 0, got {value}")
    return value


def _fraction(section: str, index: int, key: str, value: Any, *, allow_zero: bool = False) -> float:
    value = float(value)
    low_ok = value >= 0 if allow_zero else value > 0
    if not (low_ok and value <= 1):
        raise ConfigError(f"{section}[{index}]: {key} must lie in (0, 1], got {value}")
    return value


def _check_sorted_unique(section: str, sizes: list[float]) -> None:
    for a, b in zip(sizes, sizes[1:]):
        if b <= a:
            raise ConfigError(f"{section}: sizes must be strictly increasing, got {a} before {b}")


def _parse_panels(doc: Mapping[str, Any]) -> tuple[PanelSpec, ...]:
    panels = []
    for i, entry in enumerate(doc.get("panels", [])):
        panels.append(
            PanelSpec(
                peak_power_kwp=_positive("panels", i, "peak_power_kwp", entry.get("peak_power_kwp")),
                unit_price_eur=_positive("panels", i, "unit_price_eur", entry.get("unit_price_eur")),
                generation_default=bool(entry.get("generation_default", False)),
            )
        )
    _check_sorted_unique("panels", [p.peak_power_kwp for p in panels])
    return tuple(panels)


def _parse_batteries(doc: Mapping[str, Any]) -> tuple[BatterySpec, ...]:
    defaults = doc.get("battery_defaults", {})
    batteries = []
    for i, entry in enumerate(doc.get("batteries", [])):
        merged = {**defaults, **entry}
        soc_min = float(merged.get("soc_min_fraction", DEFAULT_SOC_MIN_FRACTION))
        if not 0 <= soc_min < 1:
            raise ConfigError(f"batteries[{i}]: soc_min_fraction must lie in [0, 1), got {soc_min}")
        current = merged.get("max_charge_current_a")
        batteries.append(
            BatterySpec(
                capacity_kwh=_positive("batteries", i, "capacity_kwh", merged.get("capacity_kwh")),
                price_eur=_positive("batteries", i, "price_eur", merged.get("price_eur")),
                eta_charge=_fraction("batteries", i, "eta_charge", merged.get("eta_charge", DEFAULT_ETA_CHARGE)),
                eta_discharge=_fraction(
                    "batteries", i, "eta_discharge", merged.get("eta_discharge", DEFAULT_ETA_DISCHARGE)
                ),
                soc_min_fraction=soc_min,
                c_rate_charge=_positive("batteries", i, "c_rate_charge", merged.get("c_rate_charge", DEFAULT_C_RATE)),
                c_rate_discharge=_positive(
                    "batteries", i, "c_rate_discharge", merged.get("c_rate_discharge", DEFAULT_C_RATE)
                ),
                max_charge_current_a=None if current is None else float(current),
            )
        )
    _check_sorted_unique("batteries", [b.capacity_kwh for b in batteries])
    return tuple(batteries)


def _parse_inverters(doc: Mapping[str, Any], section: str, family: InverterFamily) -> tuple[InverterSpec, ...]:
    defaults = doc.get("inverter_defaults", {})
    inverters = []
    for i, entry in enumerate(doc.get(section, [])):
        merged = {**defaults, **entry}
        inverters.append(
            InverterSpec(
                kva_rating=_positive(section, i, "kva_rating", merged.get("kva_rating")),
                price_eur=_positive(section, i, "price_eur", merged.get("price_eur")),
                family=family,
                efficiency=_fraction(section, i, "efficiency", merged.get("efficiency", DEFAULT_INVERTER_EFFICIENCY)),
            )
        )
    _check_sorted_unique(section, [v.kva_rating for v in inverters])
    return tuple(inverters)


def load_catalog(source: str | Path | Mapping[str, Any] | None = None) -> ProductCatalog:
    """Load a catalogue from a YAML path, a parsed mapping, or the bundled default.

    Raises :class:`ConfigError` naming the offending entry when the document is
    malformed or contains non-positive sizes or prices.
    """
    if source is None:
        text = resources.files("pvpayback.data").joinpath("catalog.yaml").read_text(encoding="utf-8")
        doc = yaml.safe_load(text)
    elif isinstance(source, Mapping):
        doc = source
    else:
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"catalog file not found: {path}")
        try:
            doc = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ConfigError(f"catalog file {path} is not valid YAML: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise ConfigError("catalog document must be a mapping with product sections")

    catalog = ProductCatalog(
        panels=_parse_panels(doc),
        batteries=_parse_batteries(doc),
        solar_inverters=_parse_inverters(doc, "solar_inverters", InverterFamily.SOLAR),
        hybrid_inverters=_parse_inverters(doc, "hybrid_inverters", InverterFamily.HYBRID),
        version=str(doc.get("version", "unversioned")),
    )
    for section in ("panels", "batteries", "solar_inverters", "hybrid_inverters"):
        if not getattr(catalog, section):
            raise ConfigError(f"catalog section {section!r} is missing or empty")
    catalog.generation_panel()
    return catalog


def default_catalog() -> ProductCatalog:
    return load_catalog(None)


def dump_catalog(catalog: ProductCatalog) -> dict[str, Any]:
    """Serialize a catalogue back to the document structure accepted by
    :func:`load_catalog` (round-trips exactly)."""
    doc: dict[str, Any] = {"version": catalog.version}
    doc["panels"] = [
        {
            "peak_power_kwp": p.peak_power_kwp,
            "unit_price_eur": p.unit_price_eur,
            **({"generation_default": True} if p.generation_default else {}),
        }
        for p in catalog.panels
    ]
    doc["batteries"] = [
        {
            "capacity_kwh": b.capacity_kwh,
            "price_eur": b.price_eur,
            "eta_charge": b.eta_charge,
            "eta_discharge": b.eta_discharge,
            "soc_min_fraction": b.soc_min_fraction,
            "c_rate_charge": b.c_rate_charge,
            "c_rate_discharge": b.c_rate_discharge,
            **({} if b.max_charge_current_a is None else {"max_charge_current_a": b.max_charge_current_a}),
        }
        for b in catalog.batteries
    ]
    for section, items in (("solar_inverters", catalog.solar_inverters), ("hybrid_inverters", catalog.hybrid_inverters)):
        doc[section] = [
            {"kva_rating": v.kva_rating, "price_eur": v.price_eur, "efficiency": v.efficiency} for v in items
        ]
    return doc


def smallest_inverter(catalog: ProductCatalog, family: InverterFamily | str) -> InverterSpec:
    """The family's entry with minimum kVA rating."""
    options = catalog.inverters(family)
    if not options:
        raise MissingProductError(f"no {InverterFamily(family).value} inverters in catalog")
    return min(options, key=lambda inv: inv.kva_rating)


def largest_inverter(catalog: ProductCatalog, family: InverterFamily | str) -> InverterSpec:
    options = catalog.inverters(family)
    if not options:
        raise MissingProductError(f"no {InverterFamily(family).value} inverters in catalog")
    return max(options, key=lambda inv: inv.kva_rating)
