"""Bundled q-expansions: Delta and the weight-one form eta(q)eta(q^23).

Both are computed from their product formulas; ``python -m modp_companion.data``
regenerates the JSON files shipped in ``data/``.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .characters import DirichletChar, kronecker_character
from .qseries import QExpansion

BUNDLED_TERMS = 500


def euler_product(prec: int, step: int = 1) -> list[int]:
    """prod_{n>=1} (1 - q^{step*n}) to precision ``prec`` (pentagonal number theorem)."""
    out = [0] * prec
    k = 0
    while True:
        hit = False
        for j in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2) if k else (0,):
            e = step * j
            if e < prec:
                out[e] = (-1) ** (k % 2)
                hit = True
        if not hit and k:
            break
        k += 1
    return out


def _mul(a: list[int], b: list[int], prec: int) -> list[int]:
    out = [0] * prec
    for i, x in enumerate(a[:prec]):
        if x:
            for j in range(prec - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def eta23_coefficients(prec: int) -> list[int]:
    """q prod (1 - q^n)(1 - q^{23n}), coefficients 0..prec-1."""
    body = _mul(euler_product(prec), euler_product(prec, 23), prec)
    return [0] + body[: prec - 1]


def delta_coefficients(prec: int) -> list[int]:
    """q prod (1 - q^n)^24, coefficients 0..prec-1."""
    e = euler_product(prec)
    e2 = _mul(e, e, prec)
    e4 = _mul(e2, e2, prec)
    e8 = _mul(e4, e4, prec)
    e16 = _mul(e8, e8, prec)
    body = _mul(e16, e8, prec)
    return [0] + body[: prec - 1]


def _load(name: str) -> dict:
    with resources.files(__package__).joinpath("data", name).open() as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def _bundled(name: str) -> tuple[int, ...]:
    return tuple(int(c) for c in _load(name)["coefficients"])


def _series(name: str, prec: int | None) -> QExpansion:
    coeffs = _bundled(name)
    if prec is None:
        prec = len(coeffs)
    if prec > len(coeffs):
        raise ValueError(f"only {len(coeffs)} coefficients are bundled")
    return QExpansion(list(coeffs[:prec]), prec)


def eta23(prec: int | None = None):
    """eta(q)eta(q^23) as a weight-one form of level 23 and character (-23/.)."""
    from .spaces import ModForm
    return ModForm(_series("eta23.json", prec), 1, 23, kronecker_character(-23))


def delta(prec: int | None = None):
    """The discriminant form Delta (weight 12, level 1)."""
    from .spaces import ModForm
    return ModForm(_series("delta.json", prec), 12, 1, DirichletChar.trivial(1))


def write_bundled(directory: Path | None = None, terms: int = BUNDLED_TERMS) -> list[Path]:
    directory = Path(directory) if directory else Path(__file__).with_name("data")
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, fn, desc in (("eta23.json", eta23_coefficients, "q prod (1-q^n)(1-q^(23n))"),
                           ("delta.json", delta_coefficients, "q prod (1-q^n)^24")):
        path = directory / name
        path.write_text(json.dumps({"description": desc, "terms": terms,
                                    "coefficients": fn(terms)}) + "\n")
        out.append(path)
    return out


if __name__ == "__main__":
    for path in write_bundled():
        print(path)
