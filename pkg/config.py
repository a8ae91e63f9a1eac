"""
Configuration Management for homforge
Class-based defaults per environment, overridden by a JSON file and command-line flags
"""
import json
import os
from dataclasses import asdict, dataclass, fields

from dotenv import load_dotenv

from modules.barhomology import config as bar_config
from modules.core import factorization_cache, homology_cache, model_cache
from modules.groups import config as group_config

load_dotenv()


class Config:
    """Base configuration"""
    # Size caps
    CONSTRUCTION_CAP = int(os.getenv('HOMFORGE_GROUP_CAP', '4096'))
    BAR_CELL_CAP = int(os.getenv('HOMFORGE_CAP', '100000'))
    BAR_GROUP_CAP = int(os.getenv('HOMFORGE_BAR_GROUP_CAP', '128'))

    # Reproducibility
    SEED = int(os.getenv('HOMFORGE_SEED', '7'))

    # Fields exercised by the Milnor checks
    SUPPORTED_Q = (3, 4, 5, 7, 8, 9)

    # Boundary decisions: modular refutation above this many columns
    REFUTE_PRIMES = (2, 3, 5)
    REFUTE_THRESHOLD = 20000

    # Caching
    CACHE_ENTRIES = int(os.getenv('HOMFORGE_CACHE_ENTRIES', '32'))

    LOG_LEVEL = os.getenv('HOMFORGE_LOG_LEVEL', 'WARNING')
    RECORD_TIMING = False
    JOBS = 1


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = os.getenv('HOMFORGE_LOG_LEVEL', 'INFO')


class ProductionConfig(Config):
    """Batch machines: larger caps, parallel suite"""
    BAR_CELL_CAP = int(os.getenv('HOMFORGE_CAP', '400000'))
    CONSTRUCTION_CAP = int(os.getenv('HOMFORGE_GROUP_CAP', '16384'))
    JOBS = os.cpu_count() or 1


class TestingConfig(Config):
    """Small caps for fast tests; the order-16 torus searches (15^4 columns) still fit"""
    BAR_CELL_CAP = int(os.getenv('HOMFORGE_CAP', '60000'))
    CONSTRUCTION_CAP = int(os.getenv('HOMFORGE_GROUP_CAP', '1024'))
    LOG_LEVEL = 'WARNING'


# Configuration selector
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config():
    """Get configuration based on environment"""
    env = os.getenv('HOMFORGE_ENV', 'development')
    return config.get(env, config['default'])


@dataclass
class RunConfig:
    """Settings for one run; seed and caps fixed means identical report bytes"""
    construction_cap: int = 4096
    bar_cell_cap: int = 100000
    bar_group_cap: int = 128
    seed: int = 7
    supported_q: tuple = (3, 4, 5, 7, 8, 9)
    out: str = None
    refute_primes: tuple = (2, 3, 5)
    refute_threshold: int = 20000
    record_timing: bool = False
    cache_entries: int = 32
    jobs: int = 1
    log_level: str = 'WARNING'

    def __post_init__(self):
        self.supported_q = tuple(int(q) for q in self.supported_q)
        self.refute_primes = tuple(int(p) for p in self.refute_primes)
        self.validate()

    def validate(self):
        for name in ('construction_cap', 'bar_cell_cap', 'bar_group_cap', 'cache_entries', 'jobs'):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f'{name} must be a positive integer, got {value!r}')
        if self.refute_threshold < 0:
            raise ValueError('refute_threshold must be nonnegative')
        if not self.supported_q:
            raise ValueError('supported_q must not be empty')

    @classmethod
    def from_env(cls, cfg=None):
        """Build from a configuration class (default: get_config())"""
        cfg = cfg or get_config()
        return cls(
            construction_cap=cfg.CONSTRUCTION_CAP,
            bar_cell_cap=cfg.BAR_CELL_CAP,
            bar_group_cap=cfg.BAR_GROUP_CAP,
            seed=cfg.SEED,
            supported_q=cfg.SUPPORTED_Q,
            refute_primes=cfg.REFUTE_PRIMES,
            refute_threshold=cfg.REFUTE_THRESHOLD,
            record_timing=cfg.RECORD_TIMING,
            cache_entries=cfg.CACHE_ENTRIES,
            jobs=cfg.JOBS,
            log_level=cfg.LOG_LEVEL,
        )

    def updated(self, **overrides):
        """Copy with the non-None overrides applied"""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f'unknown configuration keys: {sorted(unknown)}')
        values = asdict(self)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**values)

    @classmethod
    def from_file(cls, path, base=None):
        """JSON file mirroring the field names, layered over base"""
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f'{path}: configuration must be a JSON object')
        return (base or cls.from_env()).updated(**data)

    def apply(self):
        """Install caps, refutation settings and cache sizes in the library modules of this process"""
        group_config.CONSTRUCTION_CAP = self.construction_cap
        bar_config.BAR_CELL_CAP = self.bar_cell_cap
        bar_config.BAR_GROUP_CAP = self.bar_group_cap
        bar_config.REFUTE_PRIMES = self.refute_primes
        bar_config.REFUTE_THRESHOLD = self.refute_threshold
        for cache in (factorization_cache, model_cache):
            cache.resize(self.cache_entries)
        homology_cache.resize(8 * self.cache_entries)
        return self

    def to_dict(self):
        out = asdict(self)
        out['supported_q'] = list(self.supported_q)
        out['refute_primes'] = list(self.refute_primes)
        out.pop('out')
        out.pop('jobs')
        out.pop('cache_entries')
        out.pop('log_level')
        return out
