"""JSON schemas for configs and emitted reports."""

import json
from functools import lru_cache
from importlib import resources

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

NAMES = ("problem", "grid", "solver_config", "solve_config", "report", "classification",
         "kernel", "sweep", "audit")


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    text = resources.files(__name__).joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=1)
def _registry() -> Registry:
    return Registry().with_resources(
        (f"{n}.schema.json", Resource.from_contents(load(n))) for n in NAMES
    )


def validator(name: str) -> Draft202012Validator:
    return Draft202012Validator(load(name), registry=_registry())


def errors(name: str, instance) -> list:
    """Human-readable schema violations, ``path: message`` per line."""
    out = []
    for err in sorted(validator(name).iter_errors(instance), key=lambda e: list(e.absolute_path)):
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        out.append(f"{where}: {err.message}")
    return out


def validate(name: str, instance) -> None:
    validator(name).validate(instance)
