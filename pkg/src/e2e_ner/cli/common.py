"""Shared CLI state and helpers."""

from dataclasses import dataclass
from pathlib import Path
from typing import TypeVar

import typer
from rich.console import Console

from ..core.base import BaseDocument
from ..core.config import settings

console = Console()
err_console = Console(stderr=True)

D = TypeVar("D", bound=BaseDocument)


@dataclass
class CliState:
    """Global options given before the subcommand."""

    threads: int | None = None
    seed: int | None = None

    def seed_or(self, fallback: int | None = None) -> int:
        """``--seed`` if given, else ``fallback``, else the configured default."""
        if self.seed is not None:
            return self.seed
        return settings.DEFAULT_SEED if fallback is None else fallback


def state(ctx: typer.Context) -> CliState:
    obj = ctx.find_root().obj
    return obj if isinstance(obj, CliState) else CliState()


def load_or_default(cls: type[D], path: Path | None) -> D:
    return cls.load(path) if path is not None else cls()


def sidecar(out: Path, suffix: str) -> Path:
    """``runs/asr.ckpt`` + ``.run_config.json`` -> ``runs/asr.run_config.json``."""
    return out.with_name(out.stem + suffix)
