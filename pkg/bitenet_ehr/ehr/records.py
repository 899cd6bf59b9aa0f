# import libs
import hashlib
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
# local
from ..config import code_namespaces, dx_prefix, PAD_ID


class Vocabulary(BaseModel):
    """
    Ordered code universe.

    Real codes get ids ``1..num_codes``; id 0 is reserved for padding, so the id
    space (``size``) is ``num_codes + 1``.
    """
    model_config = ConfigDict(frozen=True)

    codes: Tuple[str, ...] = Field(..., description="Ordered unique code strings")
    _index: Dict[str, int] = PrivateAttr(default_factory=dict)

    @field_validator("codes")
    @classmethod
    def _check_codes(cls, value):
        if len(set(value)) != len(value):
            raise ValueError("vocabulary codes must be unique")
        for code in value:
            if not code.startswith(code_namespaces) or len(code) <= 3:
                raise ValueError(f"code {code!r} lacks a dx:/px: namespace")
        return value

    def model_post_init(self, __context) -> None:
        self._index = {code: i + 1 for i, code in enumerate(self.codes)}

    @property
    def index(self) -> Dict[str, int]:
        return self._index

    @property
    def size(self) -> int:
        """Id space including the padding id."""
        return len(self.codes) + 1

    @property
    def num_codes(self) -> int:
        return len(self.codes)

    def encode(self, codes: Iterable[str]) -> List[int]:
        """Map code strings to sorted ids; unknown codes raise ``KeyError``."""
        return sorted(self._index[c] for c in codes)

    def decode(self, ids: Iterable[int]) -> List[str]:
        return [self.codes[i - 1] for i in ids if i != PAD_ID]

    def content_hash(self) -> str:
        """sha256 over the ordered code list."""
        return hashlib.sha256("\n".join(self.codes).encode("utf-8")).hexdigest()


class Visit(BaseModel):
    """One hospital stay: a set of codes between admission and discharge."""
    model_config = ConfigDict(frozen=True)

    codes: Tuple[str, ...] = Field(..., description="Sorted unique code strings")
    admission_day: int = Field(..., description="Day index of admission")
    discharge_day: int = Field(..., description="Day index of discharge")

    @field_validator("codes")
    @classmethod
    def _check_codes(cls, value):
        if not value:
            raise ValueError("visit with zero codes")
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def _check_days(self) -> "Visit":
        if self.discharge_day < self.admission_day:
            raise ValueError(
                f"discharge day {self.discharge_day} precedes "
                f"admission day {self.admission_day}")
        return self

    @property
    def dx_codes(self) -> Tuple[str, ...]:
        return tuple(c for c in self.codes if c.startswith(dx_prefix))


class PatientJourney(BaseModel):
    """Time-ordered visits of one patient."""
    model_config = ConfigDict(frozen=True)

    patient_id: str = Field(..., min_length=1)
    visits: Tuple[Visit, ...] = Field(...)

    @field_validator("visits")
    @classmethod
    def _check_sorted(cls, value):
        days = [v.admission_day for v in value]
        if days != sorted(days):
            raise ValueError("visits must be sorted by admission day")
        return value

    def prefix(self, t: int) -> "PatientJourney":
        """Journey restricted to its first ``t`` visits."""
        return self.model_copy(update={"visits": self.visits[:t]})

    def __len__(self) -> int:
        return len(self.visits)


class IntervalVector(BaseModel):
    """Days since the first admission, one entry per visit."""
    model_config = ConfigDict(frozen=True)

    days: Tuple[int, ...]

    @field_validator("days")
    @classmethod
    def _check_days(cls, value):
        if value and value[0] != 0:
            raise ValueError("first interval must be 0")
        if any(b < a for a, b in zip(value, value[1:])):
            raise ValueError("intervals must be non-decreasing")
        return value


class LabeledSample(BaseModel):
    """A journey prefix with its readmission or diagnosis target."""
    model_config = ConfigDict(frozen=True)

    journey_prefix: PatientJourney
    readm_label: Optional[int] = Field(None, ge=0, le=1)
    dx_labels: Optional[FrozenSet[int]] = None

    @field_validator("dx_labels")
    @classmethod
    def _non_empty(cls, value):
        if value is not None and not value:
            raise ValueError("dx_labels must be non-empty when present")
        return value

    @property
    def patient_id(self) -> str:
        return self.journey_prefix.patient_id


class CategoryMap(BaseModel):
    """Total map from code strings to category strings."""
    model_config = ConfigDict(frozen=True)

    entries: Dict[str, str]
    categories: Tuple[str, ...]
    _category_index: Dict[str, int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._category_index = {c: i for i, c in enumerate(self.categories)}

    @classmethod
    def from_entries(cls, entries: Dict[str, str]) -> "CategoryMap":
        """Categories ordered lexicographically."""
        return cls(entries=dict(entries), categories=tuple(sorted(set(entries.values()))))

    @property
    def num_categories(self) -> int:
        return len(self.categories)

    def category_id(self, code: str) -> int:
        return self._category_index[self.entries[code]]

    def unmapped(self, journeys: Iterable[PatientJourney]) -> List[str]:
        """Diagnosis codes in ``journeys`` without a category, sorted."""
        missing = {
            code
            for journey in journeys
            for visit in journey.visits
            for code in visit.dx_codes
            if code not in self.entries
        }
        return sorted(missing)
