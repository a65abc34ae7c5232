"""
Size guards and sweep configuration.

Configuration files are flat ``key = value`` documents. They are read with
configparser under an implicit section so comments and whitespace behave the
usual way.
"""

import configparser
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, replace

from engines.homology import parse_field
from utils.errors import SplitLabError

logger = logging.getLogger(__name__)

# Default guards; every one of them can be overridden from the CLI
MAX_BETTI_VERTICES = 16
MAX_SPLIT_EDGES = 7
MAX_CG_VERTICES = 8
MAX_VD_VERTICES = 12
MAX_ISO_VERTICES = 16
MAX_SPLITTINGS = 200000

FAMILIES = ("file", "paths", "cycles", "all_connected")
SPLITTING_FILTERS = ("all", "special", "special1", "special2", "sigma")
OUTPUT_FORMATS = ("json", "csv", "text", "xlsx")
INEQUALITY_TAGS = ("pd", "reg", "betti", "dim", "depth")


class ConfigError(SplitLabError, ValueError):
    """A configuration value is missing or out of range."""


@dataclass(frozen=True)
class Caps:
    max_betti_vertices: int = MAX_BETTI_VERTICES
    max_split_edges: int = MAX_SPLIT_EDGES
    max_cg_vertices: int = MAX_CG_VERTICES
    max_vd_vertices: int = MAX_VD_VERTICES
    max_iso_vertices: int = MAX_ISO_VERTICES
    max_splittings: int = MAX_SPLITTINGS

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value <= 0:
                raise ConfigError(f"cap {name} must be positive, got {value}")


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class SweepConfig:
    """
    One experiment sweep.

    ``family`` picks the graphs (``family_arg`` is the path for ``file`` and
    the size bound otherwise), ``splitting_filter`` picks the splittings of
    each graph, ``inequalities`` restricts which verdicts produce witnesses.
    """
    family: str = "all_connected"
    family_arg: str = "4"
    field: str = "gf2"
    splitting_filter: str = "all"
    inequalities: tuple = INEQUALITY_TAGS
    caps: Caps = DEFAULT_CAPS
    output_format: str = "json"
    output_path: str = "sweep_out"
    workers: int = 1
    skip_capped: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family != "file":
            try:
                bound = int(self.family_arg)
            except ValueError:
                raise ConfigError(f"family {self.family} needs an integer bound, got {self.family_arg!r}")
            if bound < 1:
                raise ConfigError(f"family bound must be positive, got {bound}")
        elif not self.family_arg:
            raise ConfigError("family file needs a path")
        if self.splitting_filter not in SPLITTING_FILTERS:
            raise ConfigError(f"unknown splitting filter {self.splitting_filter!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {self.output_format!r}")
        unknown = set(self.inequalities) - set(INEQUALITY_TAGS)
        if unknown or not self.inequalities:
            raise ConfigError(f"bad inequality selection {self.inequalities!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        try:
            label = parse_field(self.field).label
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        # canonical label, so "GF2" and "gf2" hash alike
        object.__setattr__(self, "field", label)

    def to_dict(self):
        data = asdict(self)
        data["inequalities"] = list(self.inequalities)
        return data

    def config_hash(self):
        """SHA-256 of the canonical JSON form; the output path does not take part."""
        data = self.to_dict()
        data.pop("output_path")
        data.pop("workers")
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def with_overrides(self, **overrides):
        """Return a copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        cap_changes = {key: changes.pop(key) for key in list(changes) if key in Caps.__dataclass_fields__}
        if cap_changes:
            changes["caps"] = replace(self.caps, **cap_changes)
        return replace(self, **changes)


_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def parse_sweep_config(text):
    """
    Parse a flat key=value document into a SweepConfig.

    Recognised keys are the SweepConfig field names plus the Caps field names.
    ``family`` may also be written compactly as ``paths(6)`` or ``file(g.txt)``.

    Args:
        text: Contents of the configuration file

    Returns:
        SweepConfig
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        parser.read_string("[sweep]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot read configuration: {exc}") from exc
    raw = dict(parser["sweep"])

    values = {}
    caps = {}
    for key, value in raw.items():
        if key in Caps.__dataclass_fields__:
            try:
                caps[key] = int(value)
            except ValueError:
                raise ConfigError(f"cap {key} must be an integer, got {value!r}")
        elif key == "family":
            if "(" in value and value.endswith(")"):
                name, arg = value[:-1].split("(", 1)
                values["family"] = name.strip()
                values["family_arg"] = arg.strip()
            else:
                values["family"] = value
        elif key == "workers":
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"workers must be an integer, got {value!r}")
        elif key == "skip_capped":
            if value.lower() not in _BOOL_WORDS:
                raise ConfigError(f"skip_capped must be a boolean, got {value!r}")
            values[key] = _BOOL_WORDS[value.lower()]
        elif key == "inequalities":
            values[key] = tuple(tag.strip() for tag in value.split(",") if tag.strip())
        elif key in ("family_arg", "field", "splitting_filter", "output_format", "output_path"):
            values[key] = value
        else:
            raise ConfigError(f"unknown configuration key {key!r}")

    if caps:
        values["caps"] = Caps(**caps)
    config = SweepConfig(**values)
    logger.debug("Loaded sweep config %s", config.config_hash()[:12])
    return config


def load_sweep_config(path):
    """Read and parse a configuration file from disk."""
    with open(path, encoding="utf-8") as handle:
        return parse_sweep_config(handle.read())
