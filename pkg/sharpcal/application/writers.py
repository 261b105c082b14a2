"""Write reports onto external outputs"""

import json

import numpy as np
import pandas as pd

from sharpcal.application.application import Application
from sharpcal.external.file import csv_text
from sharpcal.util import to_jsonable
from sharpcal.validator import IS_SERIALIZABLE


class ReportWriter(Application):
    """Write a report with its run manifest embedded

    This application has one source: report_in, any report with a .to_dict()
    method (pandas tables included) or a plain dict.

    This application has one output: report_out, a ReportFile. JSON outputs
    receive the report under "report" next to the manifest under "manifest";
    CSV outputs receive the report's .to_frame() table under a single
    "# manifest: {...}" comment line.

    Attributes:
        manifest: object with a .to_dict() method, or dict, describing the
            run. None leaves the manifest out.
    """

    def __init__(self, manifest=None):
        super().__init__()

        self._init_source([
            "report_in",
        ])

        self._init_output([
            "report_out",
        ])

        self._get_source("report_in")\
            .add_desc(IS_SERIALIZABLE())

        self.manifest = manifest

    def payload(self, report):
        """JSON document written for a report"""
        if hasattr(report, "to_dict") and not isinstance(report, dict):
            body = report.to_dict(orient="records") \
                if _is_frame(report) else report.to_dict()
        else:
            body = report
        doc = {"report": body}
        manifest = self.manifest_dict()
        if manifest is not None:
            doc["manifest"] = manifest
        return doc

    def manifest_dict(self):
        if self.manifest is None or isinstance(self.manifest, dict):
            return self.manifest
        return self.manifest.to_dict()

    def manifest_comment(self):
        """Manifest line leading CSV outputs, None without a manifest"""
        manifest = self.manifest_dict()
        if manifest is None:
            return None
        return "manifest: " + json.dumps(to_jsonable(manifest),
                                         sort_keys=True)

    def csv(self, report):
        """CSV text written for a report, manifest line included"""
        return csv_text(report_frame(report), self.manifest_comment())

    def run(self, **kwargs):
        """Get the report, write it and return it"""
        report = self._source_from("report_in", **kwargs)
        self.write(report)
        return report

    def write(self, report):
        """Write a report that did not come through the graph"""
        out = self._get_output("report_out")
        if out.fmt == "csv":
            return out.request(query=report_frame(report),
                               comment=self.manifest_comment())
        return out.request(query=self.payload(report))

    def copy(self, *args, **kwargs):
        return super().copy(*args, manifest=self.manifest, **kwargs)


def _is_frame(obj):
    return isinstance(obj, pd.DataFrame)


def report_frame(report):
    """Table written for a report in CSV outputs"""
    if _is_frame(report):
        return report
    if hasattr(report, "to_frame"):
        return report.to_frame()
    doc = report if isinstance(report, dict) else report.to_dict()
    return pd.DataFrame([{k: v for k, v in doc.items() if np.isscalar(v)}])
