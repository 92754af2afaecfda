"""The closed universe of regions: the 50 US states plus Washington, DC.

Every table in this package is keyed by the 2-letter USPS code. Full state
names and 2-digit FIPS codes are accepted at ingestion and normalized here.
"""

from __future__ import annotations

# (usps, fips, name) -- display name equals the full name except where the
# id-column width forces an abbreviation (see DISPLAY_NAMES below).
_REGIONS: tuple[tuple[str, str, str], ...] = (
    ("AK", "02", "Alaska"),
    ("AL", "01", "Alabama"),
    ("AR", "05", "Arkansas"),
    ("AZ", "04", "Arizona"),
    ("CA", "06", "California"),
    ("CO", "08", "Colorado"),
    ("CT", "09", "Connecticut"),
    ("DC", "11", "District of Columbia"),
    ("DE", "10", "Delaware"),
    ("FL", "12", "Florida"),
    ("GA", "13", "Georgia"),
    ("HI", "15", "Hawaii"),
    ("IA", "19", "Iowa"),
    ("ID", "16", "Idaho"),
    ("IL", "17", "Illinois"),
    ("IN", "18", "Indiana"),
    ("KS", "20", "Kansas"),
    ("KY", "21", "Kentucky"),
    ("LA", "22", "Louisiana"),
    ("MA", "25", "Massachusetts"),
    ("MD", "24", "Maryland"),
    ("ME", "23", "Maine"),
    ("MI", "26", "Michigan"),
    ("MN", "27", "Minnesota"),
    ("MO", "29", "Missouri"),
    ("MS", "28", "Mississippi"),
    ("MT", "30", "Montana"),
    ("NC", "37", "North Carolina"),
    ("ND", "38", "North Dakota"),
    ("NE", "31", "Nebraska"),
    ("NH", "33", "New Hampshire"),
    ("NJ", "34", "New Jersey"),
    ("NM", "35", "New Mexico"),
    ("NV", "32", "Nevada"),
    ("NY", "36", "New York"),
    ("OH", "39", "Ohio"),
    ("OK", "40", "Oklahoma"),
    ("OR", "41", "Oregon"),
    ("PA", "42", "Pennsylvania"),
    ("RI", "44", "Rhode Island"),
    ("SC", "45", "South Carolina"),
    ("SD", "46", "South Dakota"),
    ("TN", "47", "Tennessee"),
    ("TX", "48", "Texas"),
    ("UT", "49", "Utah"),
    ("VA", "51", "Virginia"),
    ("VT", "50", "Vermont"),
    ("WA", "53", "Washington"),
    ("WI", "55", "Wisconsin"),
    ("WV", "54", "West Virginia"),
    ("WY", "56", "Wyoming"),
)

ALL_CODES: tuple[str, ...] = tuple(code for code, _, _ in _REGIONS)
CODE_SET: frozenset[str] = frozenset(ALL_CODES)
REGION_COUNT: int = len(ALL_CODES)

FIPS_TO_CODE: dict[str, str] = {fips: code for code, fips, _ in _REGIONS}
CODE_TO_NAME: dict[str, str] = {code: name for code, _, name in _REGIONS}

# Shown in the id column next to the link square.
DISPLAY_NAMES: dict[str, str] = {
    code: ("Dist. of Columbia" if code == "DC" else name)
    for code, name in CODE_TO_NAME.items()
}

_NAME_TO_CODE: dict[str, str] = {name.lower(): code for code, _, name in _REGIONS}


class UnknownRegionError(ValueError):
    """Raised when a label cannot be resolved to one of the 51 regions."""

    def __init__(self, label: str):
        super().__init__(f"unknown region label: {label!r}")
        self.label = label


def resolve_label(label: str) -> str:
    """Resolve a USPS code, full state name, or 2-digit FIPS code.

    Matching is case-insensitive and whitespace-tolerant; FIPS codes may be
    given with or without the leading zero.
    """
    text = label.strip()
    upper = text.upper()
    if upper in CODE_SET:
        return upper
    code = _NAME_TO_CODE.get(text.lower())
    if code is not None:
        return code
    if text.isdigit() and len(text) <= 2:
        code = FIPS_TO_CODE.get(text.zfill(2))
        if code is not None:
            return code
    raise UnknownRegionError(label)
