"""
Verification Reporting Module
Check records, the suite report and its JSON/CSV exports
"""
import json
import logging
import math
from dataclasses import dataclass, field

import pandas as pd

logger = logging.getLogger(__name__)

SCHEMA_VERSION = '1'

STATUS_PASS = 'pass'
STATUS_FAIL = 'fail'
STATUS_SKIPPED = 'skipped'
STATUS_ERROR = 'error'


def jsonable(value):
    """Recursively convert payload values into JSON-safe data"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    if isinstance(value, float) and math.isinf(value):
        return 'infinite'
    if hasattr(value, 'to_dict'):
        return jsonable(value.to_dict())
    if hasattr(value, 'to_json'):
        return jsonable(value.to_json())
    if hasattr(value, 'item'):
        return value.item()
    return value


def status_color(status):
    """Color coding for check statuses"""
    if status == STATUS_PASS:
        return 'green'
    elif status == STATUS_SKIPPED:
        return 'yellow'
    else:
        return 'red'


@dataclass
class CheckRecord:
    """Outcome of one acceptance check"""
    criterion: int
    name: str
    anchor: str
    status: str
    payload: dict = field(default_factory=dict)
    error: str = None
    required: bool = True
    elapsed: float = None

    @property
    def passed(self):
        return self.status == STATUS_PASS

    def to_dict(self, include_timing=False):
        out = {
            'criterion': self.criterion,
            'name': self.name,
            'anchor': self.anchor,
            'status': self.status,
            'required': self.required,
            'payload': jsonable(self.payload),
        }
        if self.error is not None:
            out['error'] = self.error
        if include_timing:
            out['elapsed'] = self.elapsed
        return out


@dataclass
class SuiteReport:
    """Every requested check exactly once, ordered by criterion number"""
    config: dict
    records: list = field(default_factory=list)
    include_timing: bool = False

    def __post_init__(self):
        self.records = sorted(self.records, key=lambda r: r.criterion)
        seen = [r.criterion for r in self.records]
        if len(seen) != len(set(seen)):
            raise ValueError(f'duplicate criteria in report: {seen}')

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def summary(self):
        counts = {s: 0 for s in (STATUS_PASS, STATUS_FAIL, STATUS_SKIPPED, STATUS_ERROR)}
        for r in self.records:
            counts[r.status] = counts.get(r.status, 0) + 1
        return {'total': len(self.records), **counts}

    def exit_code(self):
        """0 all pass, 1 a check failed or errored, 3 a required check was skipped"""
        if any(r.status in (STATUS_FAIL, STATUS_ERROR) for r in self.records):
            return 1
        if any(r.status == STATUS_SKIPPED and r.required for r in self.records):
            return 3
        return 0

    def to_dict(self):
        return {
            'schema': SCHEMA_VERSION,
            'config': jsonable(self.config),
            'summary': self.summary(),
            'checks': [r.to_dict(self.include_timing) for r in self.records],
        }

    def to_json(self):
        return dumps(self.to_dict())

    def to_frame(self):
        """One row per check"""
        rows = []
        for r in self.records:
            rows.append({
                'criterion': r.criterion,
                'name': r.name,
                'status': r.status,
                'required': r.required,
                'anchor': r.anchor,
                'error': r.error or '',
                'elapsed': r.elapsed if self.include_timing else None,
            })
        df = pd.DataFrame(rows, columns=['criterion', 'name', 'status', 'required', 'anchor', 'error', 'elapsed'])
        if not self.include_timing:
            df = df.drop(columns=['elapsed'])
        return df

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False)
        logger.info(f'wrote {len(self.records)} check rows to {path}')


def dumps(data):
    """Deterministic JSON text"""
    return json.dumps(jsonable(data), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def write_json(data, path=None):
    """Write to a file, or return the text for stdout when path is None"""
    text = dumps(data)
    if path:
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text)
        logger.info(f'report written to {path}')
    return text
