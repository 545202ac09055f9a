"""OAI-PMH ListRecords harvesting with resumption tokens and polite retries.

Each harvested <record> element is handed to the caller's sink as serialized
XML, exactly once per run. 503 responses honor Retry-After; transient
transport failures back off exponentially (capped) up to a bounded number of
retries. A badResumptionToken (or any other protocol error besides
noRecordsMatch) aborts the run.
"""

from __future__ import annotations

import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Callable

import requests


class HarvestError(Exception):
    pass


class HarvestProtocolError(HarvestError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"OAI-PMH error [{code}]: {message}")


class HarvestTransportError(HarvestError):
    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(f"{message} (after {attempts} attempts)")


@dataclass
class HarvestSummary:
    records: int = 0
    batches: int = 0
    errors: int = 0


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _retry_after_seconds(response: requests.Response) -> float | None:
    value = response.headers.get("Retry-After")
    if value is None:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


def _fetch_page(
    session: requests.Session,
    base_url: str,
    params: dict[str, str],
    *,
    max_retries: int,
    backoff_cap: float,
    timeout: float,
    sleep: Callable[[float], None],
) -> ET.Element:
    attempt = 0
    while True:
        wait: float | None = None
        failure = ""
        try:
            response = session.get(base_url, params=params, timeout=timeout)
        except requests.RequestException as exc:
            failure = f"request failed: {exc}"
        else:
            if response.status_code == 200:
                try:
                    return ET.fromstring(response.content)
                except ET.ParseError as exc:
                    raise HarvestProtocolError(
                        "malformedResponse", f"unparseable response body: {exc}"
                    ) from None
            if response.status_code == 503:
                wait = _retry_after_seconds(response)
                failure = "endpoint busy (503)"
            elif 500 <= response.status_code < 600:
                failure = f"server error {response.status_code}"
            else:
                raise HarvestTransportError(
                    f"unexpected HTTP status {response.status_code}", attempt + 1
                )

        attempt += 1
        if attempt > max_retries:
            raise HarvestTransportError(failure, attempt)
        if wait is None:
            wait = min(2.0 ** (attempt - 1), backoff_cap)
        sleep(wait)


def harvest(
    base_url: str,
    format: str,
    sink: Callable[[str], None],
    set_spec: str | None = None,
    *,
    session: requests.Session | None = None,
    max_retries: int = 5,
    backoff_cap: float = 60.0,
    timeout: float = 30.0,
    sleep: Callable[[float], None] = time.sleep,
) -> HarvestSummary:
    """Harvest every record of a ListRecords run into the sink.

    Continuation requests carry only the resumption token, per protocol.
    """
    own_session = session is None
    session = session or requests.Session()
    summary = HarvestSummary()
    params: dict[str, str] = {"verb": "ListRecords", "metadataPrefix": format}
    if set_spec:
        params["set"] = set_spec

    try:
        while True:
            root = _fetch_page(
                session,
                base_url,
                params,
                max_retries=max_retries,
                backoff_cap=backoff_cap,
                timeout=timeout,
                sleep=sleep,
            )

            error = next(
                (el for el in root.iter() if _local(el.tag) == "error"), None
            )
            if error is not None:
                code = error.get("code", "unknown")
                if code == "noRecordsMatch":
                    return summary
                raise HarvestProtocolError(code, error.text or "")

            summary.batches += 1
            for el in root.iter():
                if _local(el.tag) == "record":
                    sink(ET.tostring(el, encoding="unicode"))
                    summary.records += 1

            token = next(
                (
                    el.text
                    for el in root.iter()
                    if _local(el.tag) == "resumptionToken" and el.text
                ),
                None,
            )
            if not token:
                return summary
            params = {"verb": "ListRecords", "resumptionToken": token}
    finally:
        if own_session:
            session.close()
