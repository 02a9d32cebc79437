from pathlib import Path
from typing import Self

from pydantic import BaseModel, ConfigDict, ValidationError

from .exceptions import ConfigError, MissingInputError


class BaseSchema(BaseModel):
    """Immutable value object."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class BaseDocument(BaseSchema):
    """JSON document stored on disk and validated on load."""

    @classmethod
    def load(cls, path: str | Path) -> Self:
        path = Path(path)
        if not path.exists():
            raise MissingInputError(str(path), what=f"{cls.__name__} document")
        try:
            return cls.model_validate_json(path.read_text(encoding="utf-8"))
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(p) for p in first["loc"]) or None
            raise ConfigError(first["msg"], path=str(path), field=field)

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
