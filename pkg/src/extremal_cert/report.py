"""Assembly of the verification report (JSON and markdown).

The report body is deterministic: sections in fixed order, rationals as
canonical "p/q" strings, no timestamps.  ``runtime_ms`` values and the
``metadata`` block are advisory and excluded from :func:`certified_payload`,
whose SHA-256 is recorded alongside.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from .bounds import certify_A_below_9, cone_membership, sobolev_upper, yamabe_lower
from .bubbles import CERTIFIED, run_full_exclusion
from .errors import CertificationError, ConfigError
from .exactnum import format_rational, q
from .extremal import (
    F,
    certify_boundary_L,
    certify_c0_bound,
    certify_critical_point,
    certify_scalar_positive,
    f_properties,
)

REPORT_VERSION = "1"
THREADS_ENV = "EXTREMAL_CERT_THREADS"

EINSTEIN_ANNOTATION = (
    "Annotation, not a computed claim: if the bilaterally symmetric class at the certified "
    "critical point x0 carries an extremal Kahler metric g (the continuity argument on (0, L) "
    "that uses the no-bubbling verdict), then h = s^-2 g is an Einstein metric on "
    "CP2 # 2(-CP2). This artifact certifies only the arithmetic premises of that argument."
)


@dataclass(frozen=True)
class RunConfig:
    x0_width: Fraction = Fraction(1, 10**6)
    L_width: Fraction = Fraction(1, 10**3)
    a_bound: Fraction = Fraction(8)
    dioph_bound: int = 10**4
    pell_bound: int = 10**6
    format: str = "json"

    def __post_init__(self) -> None:
        for name in ("x0_width", "L_width", "a_bound"):
            object.__setattr__(self, name, q(getattr(self, name)))
        if self.x0_width <= 0 or self.L_width <= 0:
            raise ConfigError("widths must be positive")
        if self.x0_width >= 1:
            raise ConfigError("x0 width must be < 1")
        if self.a_bound <= 7:
            raise ConfigError("a_bound must exceed c1^2 = 7")
        if self.dioph_bound < 1 or self.pell_bound < 1:
            raise ConfigError("brute-force bounds must be >= 1")
        if self.format not in ("json", "md"):
            raise ConfigError(f"unknown format {self.format!r}")

    def inputs_json(self) -> dict:
        return {
            "a_bound": format_rational(self.a_bound),
            "widths": {"x0": format_rational(self.x0_width), "L": format_rational(self.L_width)},
            "brute_force_bounds": {"dioph": self.dioph_bound, "pell": self.pell_bound},
        }


def _cert(rule: str, anchor: str, data: Any, margin: Fraction | None = None) -> dict:
    return {
        "rule": rule,
        "paper_anchor": anchor,
        "data": data,
        "margin": None if margin is None else format_rational(margin),
    }


def _section(name: str, body: Callable[[], tuple[bool, list[dict]]]) -> dict:
    start = time.perf_counter()
    try:
        ok, certs = body()
        status = CERTIFIED if ok else "Failed"
    except CertificationError as exc:
        status, certs = "Failed", [_cert("error", "", {"error": f"{type(exc).__name__}: {exc}"})]
    return {
        "name": name,
        "status": status,
        "certificates": certs,
        "runtime_ms": round((time.perf_counter() - start) * 1000, 3),
    }


def _f_properties_section():
    checks = f_properties()
    return all(c.holds for c in checks), [
        _cert(c.name, "f(0) = 8, f'(0) = -4, f'(1) > 0, lim f = 9", c.to_json()) for c in checks
    ]


def _critical_section(cfg: RunConfig, out: dict):
    cert = certify_critical_point(cfg.x0_width)
    out["critical"] = cert
    data = cert.to_json()
    data["x0_decimal"] = f"{float(cert.x0.lo):.9f}"
    return cert.valid, [_cert("CriticalPoint", "unique critical point x0, f < 8 on (0, x0]", data, cert.margin)]


def _boundary_section(cfg: RunConfig, out: dict):
    cert = certify_boundary_L(cfg.L_width)
    out["boundary"] = cert
    data = cert.to_json()
    data["L_decimal"] = f"{float(cert.L.lo):.6f}"
    return cert.valid, [_cert("BoundaryRootL", "L = smallest positive solution of f(x) = 8", data)]


def _scalar_section():
    cert = certify_scalar_positive()
    return True, [_cert("ScalarPositive", "symmetric extremal metrics have s > 0", cert.to_json())]


def _c0_section():
    cert = certify_c0_bound()
    return True, [_cert("C0Bound", "|s| V^(1/2) < 24 pi sqrt2", cert.to_json(), cert.residual(0))]


def _a_below_9_section():
    cert = certify_A_below_9()
    return cert.valid, [_cert("ABelow9", "term-by-term comparison gives A < 9", cert.to_json())]


def _cone_section(out: dict):
    crit = out["critical"]
    value = F(crit.x0.hi)
    certs = []
    ok = True
    for label, a in (("critical", value), ("supremum", Fraction(9))):
        m = cone_membership(a)
        ok &= m.inside
        certs.append(_cert(f"Cone[{label}]", "A < (3/2) c1^2 = 21/2", m.to_json(), m.margin))
    return ok, certs


def _yamabe_sobolev_section():
    y = yamabe_lower(9)
    s = sobolev_upper(1)
    ok = y.at_least_4pi_sqrt6 and s.value.coefficient == 2 and s.value.radicand == 3
    return ok, [
        _cert("Yamabe", "Y^2 >= 64 pi^2 (21/2 - A) >= 96 pi^2", y.to_json(), y.y_squared_pi2.coefficient - 96),
        _cert("Sobolev", "C_S < max(6, 24 pi sqrt2) / (4 pi sqrt6) = 2 sqrt3", s.to_json()),
    ]


def _bubble_section(cfg: RunConfig, out: dict):
    run = run_full_exclusion(cfg.a_bound, out["boundary"].L, cfg.dioph_bound, cfg.pell_bound)
    certs = [c.to_json() for c in run.certificates]
    certs.append(
        {
            "rule": "Summary",
            "paper_anchor": "three remaining cases (i), (ii), (iii)",
            "data": {
                "survivors_before_diophantine": [s.to_json() for s in run.survivors_before],
                "survivors_after_diophantine": [s.to_json() for s in run.survivors_after],
                "verdict": run.verdict,
                "breakdown": run.breakdown,
            },
            "margin": None,
        }
    )
    return run.ok, certs


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_verify_all(cfg: RunConfig) -> dict:
    """Run every section in fixed order and assemble the report dictionary."""
    shared: dict[str, Any] = {}
    independent = [
        ("f_properties", _f_properties_section),
        ("critical_point", lambda: _critical_section(cfg, shared)),
        ("boundary_L", lambda: _boundary_section(cfg, shared)),
        ("scalar_positivity", _scalar_section),
        ("c0_bound", _c0_section),
        ("A_below_9", _a_below_9_section),
        ("yamabe_sobolev", _yamabe_sobolev_section),
    ]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        futures = [pool.submit(_section, name, body) for name, body in independent]
        first = {name: fut.result() for (name, _), fut in zip(independent, futures)}

    def dependent(name: str, key: str, body):
        if key not in shared:
            return {"name": name, "status": "Skipped", "certificates": [], "runtime_ms": 0.0}
        return _section(name, body)

    cone = dependent("cone_membership", "critical", lambda: _cone_section(shared))
    bubbles = dependent("bubble_exclusion", "boundary", lambda: _bubble_section(cfg, shared))

    order = [
        "f_properties",
        "critical_point",
        "boundary_L",
        "scalar_positivity",
        "c0_bound",
        "A_below_9",
        "cone_membership",
        "yamabe_sobolev",
        "bubble_exclusion",
    ]
    by_name = {**first, "cone_membership": cone, "bubble_exclusion": bubbles}
    sections = [by_name[n] for n in order]
    verdict = all(s["status"] == CERTIFIED for s in sections if s["status"] != "Skipped")
    report = {
        "version": REPORT_VERSION,
        "inputs": cfg.inputs_json(),
        "sections": sections,
        "verdict": verdict,
        "einstein_annotation": EINSTEIN_ANNOTATION,
    }
    report["metadata"] = {"tool_version": __version__, "payload_sha256": payload_digest(report)}
    return report


def certified_payload(report: dict) -> dict:
    """The report without advisory fields (timings, metadata)."""
    body = copy.deepcopy(report)
    body.pop("metadata", None)
    for section in body.get("sections", []):
        section.pop("runtime_ms", None)
    return body


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True)


def payload_digest(report: dict) -> str:
    return hashlib.sha256(canonical_json(certified_payload(report)).encode("ascii")).hexdigest()


def render_markdown(report: dict) -> str:
    lines = ["# Verification report", ""]
    lines.append(f"- verdict: **{'PASS' if report['verdict'] else 'FAIL'}**")
    for key, value in report["inputs"].items():
        lines.append(f"- {key}: `{json.dumps(value)}`")
    lines.append("")
    for section in report["sections"]:
        lines.append(f"## {section['name']} ({section['status']}, {section['runtime_ms']} ms)")
        lines.append("")
        for cert in section["certificates"]:
            margin = cert.get("margin")
            status = cert.get("status", "")
            head = f"- **{cert['rule']}**"
            if status:
                head += f" [{status}]"
            if margin is not None:
                head += f" margin `{margin}`"
            if cert.get("paper_anchor"):
                head += f": {cert['paper_anchor']}"
            lines.append(head)
            lines.append("")
            lines.append("  ```json")
            lines.extend("  " + ln for ln in json.dumps(cert["data"], indent=1).splitlines())
            lines.append("  ```")
        lines.append("")
    lines.append("## Note")
    lines.append("")
    lines.append(report["einstein_annotation"])
    if "metadata" in report:
        lines.append("")
        lines.append(f"payload sha256: `{report['metadata']['payload_sha256']}`")
    return "\n".join(lines) + "\n"
