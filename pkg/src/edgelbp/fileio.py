"""Atomic text-file writes shared by the CSV/JSON emitters."""

import os
import tempfile


def atomic_write_text(path, text):
    """Write text to path via a temp file + rename.

    A failure mid-write never leaves a partial file at the destination.
    Newlines are written verbatim so emitted files are byte-stable.
    """
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp.", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise
