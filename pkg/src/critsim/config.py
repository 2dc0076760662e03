"""Run configuration: human-editable documents, presets, and conversion to model objects.

User-facing quantities are powers (``r1_sq`` is a power reflectivity,
``loss1`` a round-trip power loss); amplitudes are derived internally via
square roots.  Documents are INI-style sections or an equivalent JSON
object; unknown sections/keys are rejected by name.  A document may be
loaded on top of a base configuration (e.g. a preset), in which case
explicitly given keys win and choosing any key of a multi-style group
(input state, sideband frequency, detection efficiency, scan span)
replaces that whole group.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .cavity import CoupledCavityConfig, Variant
from .errors import ValidationError
from .quantum import (
    DetectionModel,
    InputGaussianState,
    input_from_db,
    input_from_squeeze_factor,
)
from .sweep import ScanMode, ScanSpec


@dataclass(frozen=True)
class CavitySection:
    r0_sq: float = 0.99
    r1_sq: float = 0.999
    r2_sq: float = 0.958
    loss1: float = 0.0
    loss2: float = 0.0
    length1_m: float = 0.0295
    length2_m: float = 0.0295
    n1: float = 1.0
    n2: float = 1.0
    variant: str = "symmetric"
    single_cavity: bool = False
    phi1_offset_rad: float = 0.0
    phi2_offset_rad: float = 0.0


@dataclass(frozen=True)
class InputSection:
    """Exactly one style: ``s`` | ``squeeze_db``+``antisqueeze_db`` | ``var_x``+``var_y``."""

    s: Optional[float] = 0.0
    squeeze_db: Optional[float] = None
    antisqueeze_db: Optional[float] = None
    var_x: Optional[float] = None
    var_y: Optional[float] = None


@dataclass(frozen=True)
class SidebandSection:
    """Exactly one style: ``omega_hz`` | ``omega_fsr_fraction``."""

    omega_hz: Optional[float] = None
    omega_fsr_fraction: Optional[float] = 0.0005


@dataclass(frozen=True)
class DetectionSection:
    """At most one of ``eta`` and ``visibility`` (efficiency = visibility squared)."""

    eta: Optional[float] = 1.0
    visibility: Optional[float] = None
    lo_phase_rad: float = 0.0


@dataclass(frozen=True)
class ScanSection:
    """Exactly one span style: ``span_hz`` | ``span_fsr`` | ``span_m`` (mirror mode)."""

    mode: str = "frequency"
    span_hz: Optional[float] = None
    span_fsr: Optional[float] = 0.04
    span_m: Optional[float] = None
    points: int = 2001
    gain_ratio: float = 2.0
    wavelength_m: float = 1.064e-6


@dataclass(frozen=True)
class OutputSection:
    path: Optional[str] = None
    format: str = "csv"


@dataclass(frozen=True)
class BuiltRun:
    """Model-layer objects produced from a validated RunConfig."""

    config: CoupledCavityConfig
    input_state: InputGaussianState
    omega: float
    detection: DetectionModel
    scan: ScanSpec
    output_path: Optional[str]
    output_format: str


_VARIANTS = {
    "symmetric": Variant.SYMMETRIC_NUMERATOR,
    "as_printed": Variant.AS_PRINTED,
}
_MODES = {"frequency": ScanMode.FREQUENCY, "mirror": ScanMode.MIRROR}
_FORMATS = ("csv", "json")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


def _finite(name: str, value: float) -> float:
    _require(math.isfinite(value), f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    cavity: CavitySection = field(default_factory=CavitySection)
    input: InputSection = field(default_factory=InputSection)
    sideband: SidebandSection = field(default_factory=SidebandSection)
    detection: DetectionSection = field(default_factory=DetectionSection)
    scan: ScanSection = field(default_factory=ScanSection)
    output: OutputSection = field(default_factory=OutputSection)

    def build(self) -> BuiltRun:
        """Validate all invariants and convert to model objects."""
        cav = self.cavity
        for name in ("r0_sq", "r1_sq", "r2_sq"):
            v = _finite(f"cavity.{name}", getattr(cav, name))
            _require(0.0 <= v <= 1.0, f"cavity.{name} must be within [0, 1], got {v}")
        for name in ("loss1", "loss2"):
            v = _finite(f"cavity.{name}", getattr(cav, name))
            _require(0.0 <= v < 1.0, f"cavity.{name} must be within [0, 1), got {v}")
        for name in ("length1_m", "length2_m"):
            v = _finite(f"cavity.{name}", getattr(cav, name))
            _require(v > 0.0, f"cavity.{name} must be positive, got {v}")
        for name in ("n1", "n2"):
            v = _finite(f"cavity.{name}", getattr(cav, name))
            _require(v >= 1.0, f"cavity.{name} must be >= 1, got {v}")
        _require(
            cav.variant in _VARIANTS,
            f"cavity.variant must be one of {sorted(_VARIANTS)}, got {cav.variant!r}",
        )
        _finite("cavity.phi1_offset_rad", cav.phi1_offset_rad)
        _finite("cavity.phi2_offset_rad", cav.phi2_offset_rad)
        config = CoupledCavityConfig(
            r0=math.sqrt(cav.r0_sq),
            r1=math.sqrt(cav.r1_sq),
            r2=math.sqrt(cav.r2_sq),
            t1=math.sqrt(1.0 - cav.loss1),
            t2=math.sqrt(1.0 - cav.loss2),
            length1=cav.length1_m,
            length2=cav.length2_m,
            n1=cav.n1,
            n2=cav.n2,
            variant=_VARIANTS[cav.variant],
            single_cavity=bool(cav.single_cavity),
            phi1_offset=cav.phi1_offset_rad,
            phi2_offset=cav.phi2_offset_rad,
        )
        input_state = self._build_input()
        omega = self._build_omega(config)
        detection = self._build_detection()
        scan = self._build_scan(config)
        _require(
            self.output.format in _FORMATS,
            f"output.format must be one of {list(_FORMATS)}, got {self.output.format!r}",
        )
        return BuiltRun(
            config=config,
            input_state=input_state,
            omega=omega,
            detection=detection,
            scan=scan,
            output_path=self.output.path,
            output_format=self.output.format,
        )

    def _build_input(self) -> InputGaussianState:
        inp = self.input
        styles = []
        if inp.s is not None:
            styles.append("s")
        if inp.squeeze_db is not None or inp.antisqueeze_db is not None:
            styles.append("squeeze_db/antisqueeze_db")
            _require(
                inp.squeeze_db is not None and inp.antisqueeze_db is not None,
                "input: squeeze_db and antisqueeze_db must be given together",
            )
        if inp.var_x is not None or inp.var_y is not None:
            styles.append("var_x/var_y")
            _require(
                inp.var_x is not None and inp.var_y is not None,
                "input: var_x and var_y must be given together",
            )
        _require(
            len(styles) == 1,
            "input: specify exactly one of s | squeeze_db+antisqueeze_db | var_x+var_y"
            f" (got {styles or 'none'})",
        )
        if inp.s is not None:
            return input_from_squeeze_factor(_finite("input.s", inp.s))
        if inp.squeeze_db is not None:
            return input_from_db(
                _finite("input.squeeze_db", inp.squeeze_db),
                _finite("input.antisqueeze_db", inp.antisqueeze_db),
            )
        return InputGaussianState(
            _finite("input.var_x", inp.var_x), _finite("input.var_y", inp.var_y)
        )

    def _build_omega(self, config: CoupledCavityConfig) -> float:
        sb = self.sideband
        given = [k for k in ("omega_hz", "omega_fsr_fraction") if getattr(sb, k) is not None]
        _require(
            len(given) == 1,
            f"sideband: specify exactly one of omega_hz | omega_fsr_fraction (got {given or 'none'})",
        )
        if sb.omega_hz is not None:
            omega = _finite("sideband.omega_hz", sb.omega_hz)
        else:
            omega = _finite("sideband.omega_fsr_fraction", sb.omega_fsr_fraction) * config.fsr2
        _require(omega >= 0.0, f"sideband frequency must be >= 0, got {omega}")
        return omega

    def _build_detection(self) -> DetectionModel:
        det = self.detection
        given = [k for k in ("eta", "visibility") if getattr(det, k) is not None]
        _require(
            len(given) == 1,
            f"detection: specify exactly one of eta | visibility (got {given or 'none'})",
        )
        _finite("detection.lo_phase_rad", det.lo_phase_rad)
        if det.visibility is not None:
            v = _finite("detection.visibility", det.visibility)
            _require(0.0 < v <= 1.0, f"detection.visibility must be within (0, 1], got {v}")
            return DetectionModel.from_visibility(v, lo_phase=det.lo_phase_rad)
        eta = _finite("detection.eta", det.eta)
        _require(0.0 < eta <= 1.0, f"detection.eta must be within (0, 1], got {eta}")
        return DetectionModel(eta=eta, lo_phase=det.lo_phase_rad)

    def _build_scan(self, config: CoupledCavityConfig) -> ScanSpec:
        sc = self.scan
        _require(
            sc.mode in _MODES,
            f"scan.mode must be one of {sorted(_MODES)}, got {sc.mode!r}",
        )
        mode = _MODES[sc.mode]
        given = [k for k in ("span_hz", "span_fsr", "span_m") if getattr(sc, k) is not None]
        _require(
            len(given) == 1,
            f"scan: specify exactly one of span_hz | span_fsr | span_m (got {given or 'none'})",
        )
        key = given[0]
        raw = _finite(f"scan.{key}", getattr(sc, key))
        _require(raw >= 0.0, f"scan.{key} must be >= 0, got {raw}")
        if mode is ScanMode.MIRROR:
            _require(
                key == "span_m",
                f"scan.mode = mirror requires span_m (got {key})",
            )
            span = raw
        else:
            _require(
                key != "span_m",
                "scan.span_m requires scan.mode = mirror",
            )
            span = raw * config.fsr2 if key == "span_fsr" else raw
        return ScanSpec(
            mode=mode,
            span=span,
            points=sc.points,
            gain_ratio=sc.gain_ratio,
            wavelength=sc.wavelength_m,
        )

    def active_span_key(self) -> str:
        """Name of the span style currently in use (for CLI --span overrides)."""
        for key in ("span_hz", "span_fsr", "span_m"):
            if getattr(self.scan, key) is not None:
                return key
        return "span_fsr"


_SECTION_TYPES = {
    "cavity": CavitySection,
    "input": InputSection,
    "sideband": SidebandSection,
    "detection": DetectionSection,
    "scan": ScanSection,
    "output": OutputSection,
}

#: Keys whose presence selects a style and therefore clears the rest of the group.
_STYLE_GROUPS = {
    "input": ("s", "squeeze_db", "antisqueeze_db", "var_x", "var_y"),
    "sideband": ("omega_hz", "omega_fsr_fraction"),
    "detection": ("eta", "visibility"),
    "scan": ("span_hz", "span_fsr", "span_m"),
}

_BOOL_STRINGS = {
    "1": True, "true": True, "yes": True, "on": True,
    "0": False, "false": False, "no": False, "off": False,
}


def _coerce(section: str, key: str, raw: Any) -> Any:
    """Coerce raw document value to the declared field type, naming the key on failure."""
    field_type = _SECTION_TYPES[section].__dataclass_fields__[key].type
    where = f"{section}.{key}"
    if "bool" in field_type:
        if isinstance(raw, bool):
            return raw
        if isinstance(raw, str) and raw.strip().lower() in _BOOL_STRINGS:
            return _BOOL_STRINGS[raw.strip().lower()]
        raise ValidationError(f"{where} must be a boolean, got {raw!r}")
    if "int" in field_type:
        if isinstance(raw, bool):
            raise ValidationError(f"{where} must be an integer, got {raw!r}")
        if isinstance(raw, int):
            return raw
        try:
            return int(str(raw).strip())
        except ValueError:
            raise ValidationError(f"{where} must be an integer, got {raw!r}") from None
    if "float" in field_type:
        if isinstance(raw, bool):
            raise ValidationError(f"{where} must be a number, got {raw!r}")
        if isinstance(raw, (int, float)):
            return float(raw)
        try:
            return float(str(raw).strip())
        except ValueError:
            raise ValidationError(f"{where} must be a number, got {raw!r}") from None
    if isinstance(raw, str):
        return raw
    raise ValidationError(f"{where} must be a string, got {raw!r}")


def _parse_document(text: str) -> dict[str, dict[str, Any]]:
    """Parse INI or JSON text into {section: {key: raw value}} without validation."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config syntax error at line {exc.lineno}: {exc.msg}") from None
        if not isinstance(doc, Mapping):
            raise ValidationError("config JSON must be an object of sections")
        out: dict[str, dict[str, Any]] = {}
        for section, body in doc.items():
            if not isinstance(body, Mapping):
                raise ValidationError(f"config section {section!r} must be an object")
            out[str(section)] = {str(k): v for k, v in body.items()}
        return out
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        if lineno is None and getattr(exc, "errors", None):
            lineno = exc.errors[0][0]
        at = f" at line {lineno}" if lineno else ""
        raise ValidationError(f"config syntax error{at}: {exc.message.splitlines()[0]}") from None
    return {s: dict(parser.items(s)) for s in parser.sections()}


def load_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse a configuration document, overlay it on ``base``, and validate it.

    Raises :class:`ValidationError` with the offending section/key named
    for syntax errors, unknown keys, and invariant violations.
    """
    doc = _parse_document(text)
    rc = base if base is not None else RunConfig()
    for section, body in doc.items():
        if section not in _SECTION_TYPES:
            raise ValidationError(
                f"unknown config section {section!r} (expected one of {sorted(_SECTION_TYPES)})"
            )
        current = getattr(rc, section)
        known = current.__dataclass_fields__
        updates: dict[str, Any] = {}
        for key, raw in body.items():
            if key not in known:
                raise ValidationError(
                    f"unknown key {key!r} in section [{section}]"
                    f" (expected one of {sorted(known)})"
                )
            updates[key] = _coerce(section, key, raw)
        group = _STYLE_GROUPS.get(section, ())
        if any(k in updates for k in group):
            updates = {**{k: None for k in group}, **updates}
        rc = dataclasses.replace(rc, **{section: dataclasses.replace(current, **updates)})
    rc.build()
    return rc


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(rc: RunConfig) -> str:
    """Canonical INI rendering; parses back to an equal RunConfig."""
    lines: list[str] = []
    for section, section_type in _SECTION_TYPES.items():
        body = getattr(rc, section)
        keys = [k for k in section_type.__dataclass_fields__ if getattr(body, k) is not None]
        if not keys:
            continue
        lines.append(f"[{section}]")
        for key in keys:
            lines.append(f"{key} = {_render(getattr(body, key))}")
        lines.append("")
    return "\n".join(lines)


def _fig_s1(r1_sq: float, span_fsr: float = 0.04, points: int = 2001) -> RunConfig:
    return RunConfig(
        cavity=CavitySection(r0_sq=0.99, r1_sq=r1_sq, r2_sq=0.958),
        scan=ScanSection(span_fsr=span_fsr, points=points),
    )


def _case(r1_sq: float, single: bool, span_fsr: float = 0.04, points: int = 2001) -> RunConfig:
    return RunConfig(
        cavity=CavitySection(
            r0_sq=0.998, r1_sq=r1_sq, r2_sq=0.968, single_cavity=single
        ),
        input=InputSection(s=None, squeeze_db=1.6, antisqueeze_db=4.0),
        sideband=SidebandSection(omega_hz=2.5e6, omega_fsr_fraction=None),
        scan=ScanSection(span_fsr=span_fsr, points=points),
    )


_PRESETS: dict[str, RunConfig] = {
    "figS1_a": _fig_s1(0.999995),
    "figS1_b": _fig_s1(0.99995),
    "figS1_c": _fig_s1(0.9997),
    "figS1_d": _fig_s1(0.999),
    "figS1_e": _fig_s1(0.99),
    "figS1_f": _fig_s1(0.85, span_fsr=1.2, points=4001),
    "figS2": dataclasses.replace(_fig_s1(0.999), input=InputSection(s=0.5)),
    "case1_single": _case(0.998, single=True),
    "case1_coupled": _case(0.998, single=False),
    "case2_single": _case(0.967, single=True),
    "case2_coupled": _case(0.967, single=False, span_fsr=0.12, points=4001),
}

PRESET_NAMES: tuple[str, ...] = tuple(_PRESETS)


def preset(name: str) -> RunConfig:
    """Named run configuration; raises ValidationError for unknown names."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown preset {name!r} (available: {', '.join(PRESET_NAMES)})"
        ) from None
