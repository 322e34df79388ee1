import io
import json
import sys
from types import SimpleNamespace
from contextlib import redirect_stdout

from filtergrade.filtergrade import FilterGradeApplication


class FilterGradeTestApp:
    def __init__(self, session_files, **kwargs):
        if isinstance(session_files, str):
            session_files = [session_files]

        args = dict(
            sessions=session_files,
            format="json",
            seed=0,
            max_candidates=10_000,
            window_margin_extra=0,
            out=None,
            width=300,
            encoding="UTF-8",
            verbose=0,
            demo=False,
        )
        args.update(kwargs)
        self.args = SimpleNamespace(**args)
        self.exit_code = None

    def __call__(self) -> str:
        with redirect_stdout(io.StringIO()) as capture:
            self.exit_code = FilterGradeApplication(self.args).run()  # noqa
        return capture.getvalue()

    def json_reports(self) -> list[dict]:
        """Run with JSON output, and split the concatenated reports."""
        self.args.format = "json"
        text = self()
        decoder = json.JSONDecoder()
        reports = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            report, pos = decoder.raw_decode(text, pos)
            reports.append(report)
        return reports


if __name__ == '__main__':
    from pprint import pprint
    pprint(FilterGradeTestApp(sys.argv[1:]).json_reports(), width=200)
