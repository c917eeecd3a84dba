"""On-disk JSON caches.

Every file wraps its payload as ``{"version", "checksum", "payload"}``; the
checksum is the SHA-256 of the canonical payload text.  A version mismatch
or a bad checksum makes ``read`` return ``None`` so the caller recomputes.
Writes go to a temporary file in the same directory and are renamed into
place, so a reader never sees a partial file.
"""

import hashlib
import json
import os
import tempfile

CACHE_VERSION = 1
ENV_VAR = "QFOLD_CACHE_DIR"


def default_dir():
    return os.environ.get(ENV_VAR) or None


def canonical_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def checksum(payload) -> str:
    return hashlib.sha256(canonical_text(payload).encode()).hexdigest()


def weight_path(cache_dir, kind: str, datum, nu) -> str:
    name = "w" + "_".join(str(x) for x in nu) + ".json"
    return os.path.join(cache_dir, datum.digest(), kind, name)


def entry_path(cache_dir, kind: str, datum, key: str) -> str:
    return os.path.join(cache_dir, datum.digest(), kind, key + ".json")


def write(path: str, payload, version: int = CACHE_VERSION) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    doc = {"version": version, "checksum": checksum(payload), "payload": payload}
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(doc, sort_keys=True, indent=1))
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read(path: str, version: int = CACHE_VERSION):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, ValueError):
        return None
    if not isinstance(doc, dict) or doc.get("version") != version:
        return None
    payload = doc.get("payload")
    if doc.get("checksum") != checksum(payload):
        return None
    return payload


def roundtrip(path: str, payload, version: int = CACHE_VERSION) -> bool:
    """Write, reread and compare byte-for-byte on the canonical text."""
    write(path, payload, version)
    back = read(path, version)
    return back is not None and canonical_text(back) == canonical_text(payload)
