"""
Storage service writing run outputs (JSON, JSON lines, CSV, SVG) into the
export directory.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from core.config import config

logger = logging.getLogger(__name__)


class StorageService:
    """
    Business logic service for exporting results.

    Every file starts with the run configuration: a ``config`` key in JSON,
    a ``# config: {...}`` comment line in CSV and JSON lines, an XML comment
    in SVG.
    """

    def __init__(self, export_dir: Optional[Path] = None):
        """Initialize storage service with export directory"""
        self.export_dir = Path(export_dir or config.export_dir)
        self.export_dir.mkdir(parents=True, exist_ok=True)
        logger.info("StorageService initialized")

    def resolve(self, name: str | Path) -> Path:
        """Absolute paths are kept, bare names land in the export directory"""
        path = Path(name)
        if not path.is_absolute() and path.parent == Path("."):
            path = self.export_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _header_line(self, header: Optional[Dict[str, Any]]) -> str:
        return f"# config: {json.dumps(header or {}, sort_keys=True, default=str)}\n"

    def store_json(self, payload: Dict[str, Any], name: str | Path, header: Optional[Dict[str, Any]] = None) -> Optional[str]:
        """
        Store a single JSON document.

        Args:
            payload: JSON-serializable result
            name: File name or path
            header: Run configuration echoed under ``config``

        Returns:
            Path to stored file or None if failed
        """
        path = self.resolve(name)
        try:
            with open(path, "w", encoding="utf-8") as f:
                json.dump({"config": header or {}, **payload}, f, indent=2, sort_keys=True, default=str)
            logger.info(f"Successfully stored result to: {path}")
            return str(path)
        except (OSError, TypeError) as e:
            logger.error(f"Failed to store result: {e}")
            return None

    def store_jsonl(self, records: Iterable[Dict[str, Any]], name: str | Path, header: Optional[Dict[str, Any]] = None) -> Optional[str]:
        """One JSON record per line after the config comment"""
        path = self.resolve(name)
        try:
            with open(path, "w", encoding="utf-8") as f:
                f.write(self._header_line(header))
                for record in records:
                    f.write(json.dumps(record, sort_keys=True, default=str) + "\n")
            logger.info(f"Successfully stored records to: {path}")
            return str(path)
        except (OSError, TypeError) as e:
            logger.error(f"Failed to store records: {e}")
            return None

    def store_csv(
        self,
        rows: Sequence[Dict[str, Any]],
        name: str | Path,
        header: Optional[Dict[str, Any]] = None,
        fieldnames: Optional[List[str]] = None,
    ) -> Optional[str]:
        """
        Store rows as CSV with a leading config comment.

        Args:
            rows: Row dictionaries, written in the given order
            name: File name or path
            header: Run configuration
            fieldnames: Column order, keys of the first row by default

        Returns:
            Path to stored file or None if failed
        """
        if not rows and not fieldnames:
            logger.warning("No rows provided for storage")
            return None
        path = self.resolve(name)
        try:
            with open(path, "w", newline="", encoding="utf-8") as csvfile:
                csvfile.write(self._header_line(header))
                writer = csv.DictWriter(csvfile, fieldnames=fieldnames or list(rows[0].keys()))
                writer.writeheader()
                writer.writerows(rows)
            logger.info(f"Successfully stored {len(rows)} rows to: {path}")
            return str(path)
        except (OSError, ValueError) as e:
            logger.error(f"Failed to store rows: {e}")
            return None

    def store_svg(self, svg: str, name: str | Path, header: Optional[Dict[str, Any]] = None) -> Optional[str]:
        """Store an SVG document, config echoed as a comment after the XML prolog"""
        path = self.resolve(name)
        comment = f"<!-- config: {json.dumps(header or {}, sort_keys=True, default=str)} -->\n"
        if svg.startswith("<?xml"):
            prolog, _, body = svg.partition("\n")
            document = f"{prolog}\n{comment}{body}"
        else:
            document = comment + svg
        try:
            path.write_text(document, encoding="utf-8")
            logger.info(f"Successfully stored figure to: {path}")
            return str(path)
        except OSError as e:
            logger.error(f"Failed to store figure: {e}")
            return None

    def read_csv(self, path: str | Path) -> List[Dict[str, str]]:
        """Rows of a CSV written by ``store_csv``, config line skipped"""
        with open(path, newline="", encoding="utf-8") as f:
            lines = [line for line in f if not line.startswith("#")]
        return list(csv.DictReader(lines))

    def read_jsonl(self, path: str | Path) -> List[Dict[str, Any]]:
        """Records of a JSON-lines file; comment and blank lines are skipped"""
        with open(path, encoding="utf-8") as f:
            return [json.loads(line) for line in f if line.strip() and not line.startswith("#")]
