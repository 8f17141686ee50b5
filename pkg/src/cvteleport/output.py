"""Deterministic CSV and JSON writers with manifest sidecars."""

import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__

OUTPUT_DIR_ENV = "CVTELEPORT_OUTPUT_DIR"


def fmt(x):
    """17 significant digits, '.' decimal separator, empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == 0.0:
            x = 0.0  # drop the sign of negative zero
        return format(x, ".17g")
    return str(x)


def csv_text(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def json_text(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def default_dir():
    return os.environ.get(OUTPUT_DIR_ENV)


class Sink:
    """Where a command writes its table.

    ``path`` of ``None`` means: the default output directory (from the
    environment) if set, otherwise standard output. ``'-'`` forces standard
    output. Files get a ``<name>.manifest.json`` sidecar.
    """

    def __init__(self, path=None, directory=None, stdout=None):
        self.path = path
        self.directory = directory
        self.stdout = stdout or sys.stdout
        self.written = []

    def resolve(self, default_name):
        if self.path == "-":
            return None
        if self.path:
            return self.path
        directory = self.directory or default_dir()
        if directory:
            return os.path.join(directory, default_name)
        return None

    def write_table(self, default_name, columns, rows, manifest):
        rows = list(rows)
        text = csv_text(columns, rows)
        manifest = dict(manifest)
        manifest.update({"columns": list(columns), "rows": len(rows), "version": __version__})
        target = self.resolve(default_name)
        if target is None:
            self.stdout.write(text)
            return None
        os.makedirs(os.path.dirname(os.path.abspath(target)), exist_ok=True)
        with open(target, "w", newline="", encoding="ascii") as fh:
            fh.write(text)
        with open(target + ".manifest.json", "w", newline="", encoding="ascii") as fh:
            fh.write(json_text(manifest))
        self.written.append(target)
        return target

    def write_json(self, default_name, obj):
        text = json_text(obj)
        target = self.resolve(default_name)
        if target is None:
            self.stdout.write(text)
            return None
        os.makedirs(os.path.dirname(os.path.abspath(target)), exist_ok=True)
        with open(target, "w", newline="", encoding="ascii") as fh:
            fh.write(text)
        self.written.append(target)
        return target
