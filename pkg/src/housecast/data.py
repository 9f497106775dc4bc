"""Typed data model and CSV/TOML loaders for the forecasting fixtures.

Everything downstream (poll aggregation, the four models, the district
simulator) consumes only the validated records produced here.  Loads are
all-or-nothing: any bad row aborts with a diagnostic naming file, row and
column, so partial datasets never escape.
"""

from __future__ import annotations

import datetime as dt
import enum
import hashlib
from dataclasses import dataclass
from pathlib import Path

import csv

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

HOUSE_SEATS = 435
MAJORITY = 218
FIRST_MODERN_YEAR = 1946


class DataError(ValueError):
    """A fixture file failed validation; the message carries file/row context."""


class PollMethod(enum.Enum):
    LIVE = "live"
    ONLINE = "online"
    IVR = "ivr"
    ROBOTIC = "robotic"


class Party(enum.Enum):
    D = "D"
    R = "R"


class Incumbency(enum.Enum):
    DEM_INCUMBENT = "dem_incumbent"
    REP_INCUMBENT = "rep_incumbent"
    OPEN = "open"


class RatingCategory(enum.Enum):
    """Expert seat ratings, ordered from safest-Democratic to safest-Republican."""

    SAFE_D = "safe_D"
    LIKELY_D = "likely_D"
    LEAN_D = "lean_D"
    TOSSUP = "tossup"
    LEAN_R = "lean_R"
    LIKELY_R = "likely_R"
    SAFE_R = "safe_R"

    @property
    def rank(self) -> int:
        return _CATEGORY_ORDER.index(self)


_CATEGORY_ORDER = [
    RatingCategory.SAFE_D,
    RatingCategory.LIKELY_D,
    RatingCategory.LEAN_D,
    RatingCategory.TOSSUP,
    RatingCategory.LEAN_R,
    RatingCategory.LIKELY_R,
    RatingCategory.SAFE_R,
]


class RatingSource(enum.Enum):
    COOK = "cook"
    INSIDE_ELECTIONS = "inside_elections"


@dataclass(frozen=True)
class GenericBallotPoll:
    pollster_id: str
    method: PollMethod
    start_date: dt.date
    end_date: dt.date
    dem_pct: float
    rep_pct: float
    days_before: int

    @property
    def margin(self) -> float:
        """Republican minus Democratic share, in percentage points."""
        return self.rep_pct - self.dem_pct

    @property
    def dem_two_party_share(self) -> float:
        total = self.dem_pct + self.rep_pct
        if total == 0:
            raise ValueError(f"poll {self.pollster_id} has zero two-party support")
        return 100.0 * self.dem_pct / total


@dataclass(frozen=True)
class HistoricalElection:
    year: int
    is_midterm: bool
    president_party: Party
    rep_seats_held: int | None
    rep_seat_change: int | None
    generic_margin_sep: float | None
    generic_dem_share_early: float | None
    dem_national_vote: float | None
    rdi_growth_h1: float | None
    approval_june: float | None
    disapproval_june: float | None
    net_seats_in_play_lean: int | None
    net_seats_in_play_tossup: int | None
    expert_seat_differential: int | None

    @property
    def incumbent_seat_change(self) -> int | None:
        """Seat change for the president's party (sign-flipped rep_seat_change)."""
        if self.rep_seat_change is None:
            return None
        if self.president_party is Party.R:
            return self.rep_seat_change
        return -self.rep_seat_change

    @property
    def president_indicator(self) -> float:
        """+1 under a Republican president, -1 under a Democrat."""
        return 1.0 if self.president_party is Party.R else -1.0


@dataclass(frozen=True)
class DistrictRecord:
    district_id: str
    dem_house_share_2016: float | None
    contested_2016: bool
    dem_pres_share_2016: float
    incumbency_2018: Incumbency
    freshman: bool
    uncontested_2018_winner: Party | None

    @property
    def conceded_party_2016(self) -> Party | None:
        """Winner of the uncontested 2016 race, or None if contested in 2016.

        With no vote share on record, the winner is inferred from who holds
        the seat in 2018 (or, for an open seat, from the sole 2018 party).
        """
        if self.contested_2016:
            return None
        if self.incumbency_2018 is Incumbency.DEM_INCUMBENT:
            return Party.D
        if self.incumbency_2018 is Incumbency.REP_INCUMBENT:
            return Party.R
        return self.uncontested_2018_winner

    @property
    def winner_2016(self) -> Party | None:
        """2016 winner where determinable: from the vote share, else concession."""
        if self.contested_2016:
            if self.dem_house_share_2016 is None:
                return None
            return Party.D if self.dem_house_share_2016 > 50.0 else Party.R
        return self.conceded_party_2016


@dataclass(frozen=True)
class SeatRating:
    district_id: str
    category: RatingCategory
    holder: Party
    source: RatingSource


@dataclass(frozen=True)
class DatasetManifest:
    """Parsed dataset.toml: file names, election date, and default inputs."""

    files: dict
    election_date: dt.date
    inputs: dict
    windows: dict
    model_start_years: dict
    simulation: dict
    ui_ranges: dict


@dataclass(frozen=True)
class Dataset:
    """All fixture data for one forecast cycle, validated and immutable."""

    manifest: DatasetManifest
    polls: tuple
    elections: tuple
    districts: tuple
    ratings: tuple
    digest: str

    def election(self, year: int) -> HistoricalElection:
        for row in self.elections:
            if row.year == year:
                return row
        raise KeyError(f"no election row for year {year}")


def _row_error(path, row_num, column, message) -> DataError:
    return DataError(f"{Path(path).name} row {row_num}, column '{column}': {message}")


def _parse_float(raw, path, row_num, column, lo=None, hi=None):
    try:
        value = float(raw)
    except ValueError:
        raise _row_error(path, row_num, column, f"cannot parse {raw!r} as a number")
    if lo is not None and value < lo or hi is not None and value > hi:
        raise _row_error(path, row_num, column, f"value {value} outside [{lo}, {hi}]")
    return value


def _parse_float_opt(raw, path, row_num, column, lo=None, hi=None):
    if raw is None or raw.strip() == "":
        return None
    return _parse_float(raw, path, row_num, column, lo, hi)


def _parse_int(raw, path, row_num, column, lo=None, hi=None):
    try:
        value = int(raw)
    except ValueError:
        raise _row_error(path, row_num, column, f"cannot parse {raw!r} as an integer")
    if lo is not None and value < lo or hi is not None and value > hi:
        raise _row_error(path, row_num, column, f"value {value} outside [{lo}, {hi}]")
    return value


def _parse_int_opt(raw, path, row_num, column, lo=None, hi=None):
    if raw is None or raw.strip() == "":
        return None
    return _parse_int(raw, path, row_num, column, lo, hi)


def _parse_date(raw, path, row_num, column):
    try:
        return dt.date.fromisoformat(raw)
    except ValueError:
        raise _row_error(path, row_num, column, f"cannot parse {raw!r} as ISO date")


def _parse_bool(raw, path, row_num, column):
    lowered = str(raw).strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise _row_error(path, row_num, column, f"cannot parse {raw!r} as a boolean")


def _parse_enum(enum_cls, raw, path, row_num, column):
    try:
        return enum_cls(str(raw).strip())
    except ValueError:
        valid = ", ".join(member.value for member in enum_cls)
        raise _row_error(path, row_num, column, f"{raw!r} is not one of: {valid}")


def _read_rows(path, required_columns):
    path = Path(path)
    if not path.exists():
        raise DataError(f"fixture file not found: {path}")
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise DataError(f"{path.name}: empty file, header row required")
        missing = [c for c in required_columns if c not in reader.fieldnames]
        if missing:
            raise DataError(f"{path.name}: missing columns {missing}")
        # Row numbers are 1-based over data rows (header excluded).
        return [(i, row) for i, row in enumerate(reader, start=1)]


def poll_field_median(start_date: dt.date, end_date: dt.date) -> dt.date:
    """Median field date, rounded toward the start for even-length spans."""
    return start_date + dt.timedelta(days=(end_date - start_date).days // 2)


def load_polls(path, election_date: dt.date):
    """Load polls.csv; each poll is annotated with days-before-election."""
    polls = []
    for row_num, row in _read_rows(
        path, ["pollster_id", "method", "start_date", "end_date", "dem_pct", "rep_pct"]
    ):
        start = _parse_date(row["start_date"], path, row_num, "start_date")
        end = _parse_date(row["end_date"], path, row_num, "end_date")
        if end < start:
            raise _row_error(path, row_num, "end_date", f"{end} precedes {start}")
        dem = _parse_float(row["dem_pct"], path, row_num, "dem_pct", 0.0, 100.0)
        rep = _parse_float(row["rep_pct"], path, row_num, "rep_pct", 0.0, 100.0)
        if dem + rep > 100.0:
            raise _row_error(
                path, row_num, "dem_pct", f"dem_pct + rep_pct = {dem + rep} exceeds 100"
            )
        polls.append(
            GenericBallotPoll(
                pollster_id=row["pollster_id"],
                method=_parse_enum(PollMethod, row["method"], path, row_num, "method"),
                start_date=start,
                end_date=end,
                dem_pct=dem,
                rep_pct=rep,
                days_before=(election_date - poll_field_median(start, end)).days,
            )
        )
    return tuple(polls)


_ELECTION_COLUMNS = [
    "year",
    "is_midterm",
    "president_party",
    "rep_seats_held",
    "rep_seat_change",
    "generic_margin_sep",
    "generic_dem_share_early",
    "dem_national_vote",
    "rdi_growth_h1",
    "approval_june",
    "disapproval_june",
    "net_seats_in_play_lean",
    "net_seats_in_play_tossup",
    "expert_seat_differential",
]


def load_elections(path):
    """Load elections.csv; one row per post-WWII election, keyed by year."""
    rows = []
    seen_years = set()
    for row_num, row in _read_rows(path, _ELECTION_COLUMNS):
        year = _parse_int(row["year"], path, row_num, "year", FIRST_MODERN_YEAR)
        if year in seen_years:
            raise _row_error(path, row_num, "year", f"duplicate year {year}")
        seen_years.add(year)
        rows.append(
            HistoricalElection(
                year=year,
                is_midterm=_parse_bool(row["is_midterm"], path, row_num, "is_midterm"),
                president_party=_parse_enum(
                    Party, row["president_party"], path, row_num, "president_party"
                ),
                rep_seats_held=_parse_int_opt(
                    row["rep_seats_held"], path, row_num, "rep_seats_held", 0, HOUSE_SEATS
                ),
                rep_seat_change=_parse_int_opt(
                    row["rep_seat_change"], path, row_num, "rep_seat_change"
                ),
                generic_margin_sep=_parse_float_opt(
                    row["generic_margin_sep"], path, row_num, "generic_margin_sep"
                ),
                generic_dem_share_early=_parse_float_opt(
                    row["generic_dem_share_early"],
                    path,
                    row_num,
                    "generic_dem_share_early",
                ),
                dem_national_vote=_parse_float_opt(
                    row["dem_national_vote"], path, row_num, "dem_national_vote"
                ),
                rdi_growth_h1=_parse_float_opt(
                    row["rdi_growth_h1"], path, row_num, "rdi_growth_h1"
                ),
                approval_june=_parse_float_opt(
                    row["approval_june"], path, row_num, "approval_june", 0.0, 100.0
                ),
                disapproval_june=_parse_float_opt(
                    row["disapproval_june"], path, row_num, "disapproval_june", 0.0, 100.0
                ),
                net_seats_in_play_lean=_parse_int_opt(
                    row["net_seats_in_play_lean"], path, row_num, "net_seats_in_play_lean"
                ),
                net_seats_in_play_tossup=_parse_int_opt(
                    row["net_seats_in_play_tossup"],
                    path,
                    row_num,
                    "net_seats_in_play_tossup",
                ),
                expert_seat_differential=_parse_int_opt(
                    row["expert_seat_differential"],
                    path,
                    row_num,
                    "expert_seat_differential",
                ),
            )
        )
    return tuple(rows)


def load_districts(path):
    """Load districts.csv: 2016 results, incumbency and contestedness per district."""
    rows = []
    seen_ids = set()
    columns = [
        "district_id",
        "dem_house_share_2016",
        "contested_2016",
        "dem_pres_share_2016",
        "incumbency_2018",
        "freshman",
        "uncontested_2018_winner",
    ]
    for row_num, row in _read_rows(path, columns):
        district_id = row["district_id"].strip()
        if not district_id:
            raise _row_error(path, row_num, "district_id", "empty district id")
        if district_id in seen_ids:
            raise _row_error(
                path, row_num, "district_id", f"duplicate district {district_id}"
            )
        seen_ids.add(district_id)
        contested = _parse_bool(row["contested_2016"], path, row_num, "contested_2016")
        house_share = _parse_float_opt(
            row["dem_house_share_2016"], path, row_num, "dem_house_share_2016", 0.0, 100.0
        )
        if not contested and house_share is not None:
            raise _row_error(
                path,
                row_num,
                "dem_house_share_2016",
                f"{district_id} was uncontested in 2016 but carries a house share",
            )
        incumbency = _parse_enum(
            Incumbency, row["incumbency_2018"], path, row_num, "incumbency_2018"
        )
        freshman = _parse_bool(row["freshman"], path, row_num, "freshman")
        if freshman and incumbency is Incumbency.OPEN:
            raise _row_error(
                path, row_num, "freshman", f"{district_id} is open but flagged freshman"
            )
        raw_winner = row["uncontested_2018_winner"].strip()
        winner_2018 = (
            None
            if raw_winner in ("", "none")
            else _parse_enum(Party, raw_winner, path, row_num, "uncontested_2018_winner")
        )
        record = DistrictRecord(
            district_id=district_id,
            dem_house_share_2016=house_share,
            contested_2016=contested,
            dem_pres_share_2016=_parse_float(
                row["dem_pres_share_2016"], path, row_num, "dem_pres_share_2016", 0.0, 100.0
            ),
            incumbency_2018=incumbency,
            freshman=freshman,
            uncontested_2018_winner=winner_2018,
        )
        if not contested and record.conceded_party_2016 is None:
            raise _row_error(
                path,
                row_num,
                "contested_2016",
                f"{district_id} was uncontested in 2016 but its winner cannot be "
                "inferred (open in 2018 with both parties contesting)",
            )
        rows.append(record)
    return tuple(rows)


def load_ratings(path):
    """Load ratings.csv; one rating per (district, source)."""
    rows = []
    seen_keys = set()
    for row_num, row in _read_rows(path, ["district_id", "category", "holder", "source"]):
        district_id = row["district_id"].strip()
        source = _parse_enum(RatingSource, row["source"], path, row_num, "source")
        key = (district_id, source)
        if key in seen_keys:
            raise _row_error(
                path,
                row_num,
                "district_id",
                f"duplicate rating for {district_id} from {source.value}",
            )
        seen_keys.add(key)
        rows.append(
            SeatRating(
                district_id=district_id,
                category=_parse_enum(
                    RatingCategory, row["category"], path, row_num, "category"
                ),
                holder=_parse_enum(Party, row["holder"], path, row_num, "holder"),
                source=source,
            )
        )
    return tuple(rows)


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    if not path.exists():
        raise DataError(f"manifest not found: {path}")
    with open(path, "rb") as handle:
        try:
            raw = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise DataError(f"{path.name}: {exc}")
    try:
        files = dict(raw["files"])
        election_date = raw["election"]["date"]
        inputs = dict(raw["inputs"])
        windows = {k: dict(v) for k, v in raw["windows"].items()}
        model_start_years = dict(raw["model_start_years"])
        simulation = dict(raw["simulation"])
    except KeyError as exc:
        raise DataError(f"{path.name}: missing manifest section/key {exc}")
    if not isinstance(election_date, dt.date):
        raise DataError(f"{path.name}: election.date must be a TOML date")
    ui_ranges = {k: list(v) for k, v in raw.get("ui", {}).get("ranges", {}).items()}
    return DatasetManifest(
        files=files,
        election_date=election_date,
        inputs=inputs,
        windows=windows,
        model_start_years=model_start_years,
        simulation=simulation,
        ui_ranges=ui_ranges,
    )


def load_dataset(data_dir) -> Dataset:
    """Load and cross-validate the whole fixture directory.

    The digest is a SHA-256 over the manifest and the four data files, so it
    changes exactly when any fixture byte changes.
    """
    data_dir = Path(data_dir)
    manifest_path = data_dir / "dataset.toml"
    manifest = load_manifest(manifest_path)

    paths = {}
    for key in ("polls", "elections", "districts", "ratings"):
        if key not in manifest.files:
            raise DataError(f"dataset.toml: [files] is missing '{key}'")
        paths[key] = data_dir / manifest.files[key]

    polls = load_polls(paths["polls"], manifest.election_date)
    elections = load_elections(paths["elections"])
    districts = load_districts(paths["districts"])
    ratings = load_ratings(paths["ratings"])

    if len(districts) != HOUSE_SEATS:
        raise DataError(
            f"{paths['districts'].name}: expected {HOUSE_SEATS} districts, "
            f"found {len(districts)}"
        )
    district_ids = {d.district_id for d in districts}
    for rating in ratings:
        if rating.district_id not in district_ids:
            raise DataError(
                f"{paths['ratings'].name}: rating for unknown district "
                f"{rating.district_id}"
            )

    hasher = hashlib.sha256()
    for file_path in [manifest_path] + [paths[k] for k in sorted(paths)]:
        hasher.update(file_path.read_bytes())
    return Dataset(
        manifest=manifest,
        polls=polls,
        elections=elections,
        districts=districts,
        ratings=ratings,
        digest=hasher.hexdigest(),
    )


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def polls_to_csv(polls, path) -> None:
    _write_csv(
        path,
        ["pollster_id", "method", "start_date", "end_date", "dem_pct", "rep_pct"],
        [
            [p.pollster_id, p.method, p.start_date.isoformat(), p.end_date.isoformat(), p.dem_pct, p.rep_pct]
            for p in polls
        ],
    )


def elections_to_csv(elections, path) -> None:
    _write_csv(
        path,
        _ELECTION_COLUMNS,
        [
            [
                e.year, e.is_midterm, e.president_party, e.rep_seats_held,
                e.rep_seat_change, e.generic_margin_sep, e.generic_dem_share_early,
                e.dem_national_vote, e.rdi_growth_h1, e.approval_june,
                e.disapproval_june, e.net_seats_in_play_lean,
                e.net_seats_in_play_tossup, e.expert_seat_differential,
            ]
            for e in elections
        ],
    )


def districts_to_csv(districts, path) -> None:
    _write_csv(
        path,
        [
            "district_id", "dem_house_share_2016", "contested_2016",
            "dem_pres_share_2016", "incumbency_2018", "freshman",
            "uncontested_2018_winner",
        ],
        [
            [
                d.district_id, d.dem_house_share_2016, d.contested_2016,
                d.dem_pres_share_2016, d.incumbency_2018, d.freshman,
                "none" if d.uncontested_2018_winner is None else d.uncontested_2018_winner,
            ]
            for d in districts
        ],
    )


def ratings_to_csv(ratings, path) -> None:
    _write_csv(
        path,
        ["district_id", "category", "holder", "source"],
        [[r.district_id, r.category, r.holder, r.source] for r in ratings],
    )


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])
