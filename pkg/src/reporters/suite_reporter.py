import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from bench.harness import SuiteRun
from bench.metrics import METRIC_COLUMNS

REPORT_FORMATS = ('json', 'csv')

CONFIG_COLUMNS = ['mode', 'audit', 'strategy', 'canonize', 'bloom_bits', 'o1', 'o2', 'o3', 'lookup_deadline_ms']

# Fixed CSV header: every SuiteMetrics field, then the configuration echo
CSV_HEADER = METRIC_COLUMNS + [f'config_{name}' for name in CONFIG_COLUMNS]


def run_to_dict(run: SuiteRun, include_file_records: bool = False) -> Dict[str, Any]:
    data = run.metrics.to_dict()
    data['config'] = run.config_echo()
    if run.audit:
        data['audit_findings'] = [f.to_dict() for f in run.findings]
    if include_file_records:
        data['files'] = [r.to_dict() for r in run.records]
    return data


class JSONReporter:
    """Generate JSON reports for suite runs"""

    def __init__(self, report_path: Union[str, Path], include_file_records: bool = False):
        self.report_path = Path(report_path)
        self.include_file_records = include_file_records

    def generate_report(self, runs: Sequence[SuiteRun]) -> str:
        self.report_path.parent.mkdir(parents=True, exist_ok=True)
        report_data = [run_to_dict(run, self.include_file_records) for run in runs]
        with open(self.report_path, 'w', encoding='utf-8') as f:
            json.dump(report_data, f, indent=2)
            f.write('\n')
        return str(self.report_path)


class CSVReporter:
    """Generate CSV reports for suite runs: one header row, one row per suite"""

    def __init__(self, report_path: Union[str, Path]):
        self.report_path = Path(report_path)

    @staticmethod
    def rows(runs: Sequence[SuiteRun]) -> List[Dict[str, Any]]:
        rows = []
        for run in runs:
            row = run.metrics.to_dict()
            echo = run.config_echo()
            row.update({f'config_{name}': echo.get(name) for name in CONFIG_COLUMNS})
            rows.append(row)
        return rows

    def generate_report(self, runs: Sequence[SuiteRun]) -> str:
        self.report_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.report_path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=CSV_HEADER, lineterminator='\n')
            writer.writeheader()
            writer.writerows(self.rows(runs))
        return str(self.report_path)


def emit_report(runs: Sequence[SuiteRun], report_format: str, path: Union[str, Path],
                include_file_records: bool = False) -> str:
    if report_format == 'json':
        return JSONReporter(path, include_file_records).generate_report(runs)
    if report_format == 'csv':
        return CSVReporter(path).generate_report(runs)
    raise ValueError(f"Unknown report format '{report_format}', expected one of {', '.join(REPORT_FORMATS)}")
