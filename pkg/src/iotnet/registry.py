"""Sector registry: the 44 two-digit STAN sectors (ISIC Rev.4 based)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import RegistryError

STAN_SECTORS: tuple[tuple[str, str], ...] = (
    ("01", "Agriculture, hunting, forestry"),
    ("02", "Fishing and aquaculture"),
    ("03", "Mining and quarrying, energy producing products"),
    ("04", "Mining and quarrying, non-energy producing products"),
    ("05", "Mining support service activities"),
    ("06", "Food products, beverages and tobacco"),
    ("07", "Textiles, textile products, leather and footwear"),
    ("08", "Wood and products of wood and cork"),
    ("09", "Paper products and printing"),
    ("10", "Coke and refined petroleum products"),
    ("11", "Chemical and chemical products"),
    ("12", "Pharmaceuticals, medicinal chemical and botanical products"),
    ("13", "Rubber and plastics products"),
    ("14", "Other non-metallic mineral products"),
    ("15", "Basic metals"),
    ("16", "Fabricated metal products"),
    ("17", "Computer, electronic and optical equipment"),
    ("18", "Electrical equipment"),
    ("19", "Machinery and equipment, not elsewhere classified"),
    ("20", "Motor vehicles, trailers and semi-trailers"),
    ("21", "Other transport equipment"),
    ("22", "Manufacturing nec; repair and installation of machinery and equipment"),
    ("23", "Electricity, gas, steam and air conditioning supply"),
    ("24", "Water supply; sewerage, waste management and remediation activities"),
    ("25", "Construction"),
    ("26", "Wholesale and retail trade; repair of motor vehicles"),
    ("27", "Land transport and transport via pipelines"),
    ("28", "Water transport"),
    ("29", "Air transport"),
    ("30", "Warehousing and support activities for transportation"),
    ("31", "Postal and courier activities"),
    ("32", "Accommodation and food service activities"),
    ("33", "Publishing, audiovisual and broadcasting activities"),
    ("34", "Telecommunications"),
    ("35", "IT and other information services"),
    ("36", "Financial and insurance activities"),
    ("37", "Real estate activities"),
    ("38", "Professional, scientific and technical activities"),
    ("39", "Administrative and support services"),
    ("40", "Public administration and defence; compulsory social security"),
    ("41", "Education"),
    ("42", "Human health and social work activities"),
    ("43", "Arts, entertainment and recreation"),
    ("44", "Other service activities"),
)


@dataclass(frozen=True)
class SectorRegistry:
    entries: tuple[tuple[str, str], ...] = STAN_SECTORS
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: dict[str, int] = {}
        for pos, (code, _name) in enumerate(self.entries):
            if code in index:
                raise ValueError(f"duplicate sector code {code!r}")
            index[code] = pos
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, code: object) -> bool:
        return code in self._index

    @property
    def codes(self) -> list[str]:
        return [code for code, _ in self.entries]

    def name(self, code: str) -> str:
        try:
            return self.entries[self._index[code]][1]
        except KeyError:
            raise RegistryError(f"unknown sector code {code!r}") from None

    def index(self, code: str) -> int:
        try:
            return self._index[code]
        except KeyError:
            raise RegistryError(f"unknown sector code {code!r}") from None

    def code_at(self, index: int) -> str:
        if not 0 <= index < len(self.entries):
            raise RegistryError(f"sector index {index} out of range")
        return self.entries[index][0]

    def check(self, codes) -> None:
        """Raise RegistryError listing every code not in the registry."""
        unknown = [c for c in codes if c not in self._index]
        if unknown:
            raise RegistryError(f"unknown sector code(s): {', '.join(unknown)}")


STAN = SectorRegistry()
