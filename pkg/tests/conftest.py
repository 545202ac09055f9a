import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import pytest

from scholnet.builder import BuildConfig, CorpusIndex, assemble
from scholnet.graph import NodeId, NodeKind
from scholnet.records import AuthorName, JournalRef, PaperRecord, RawReference


# Three-paper fixture used across the suite:
#   P1 {authors A, B; journal J1; cites P2, P3}
#   P2 {authors B, C; journal J2; cites P3}
#   P3 {author C; journal J1; no references}
class F1:
    A = NodeId(NodeKind.AUTHOR, "ABEL,A")
    B = NodeId(NodeKind.AUTHOR, "BELL,B")
    C = NodeId(NodeKind.AUTHOR, "COLE,C")
    P1 = NodeId(NodeKind.PAPER, "P1")
    P2 = NodeId(NodeKind.PAPER, "P2")
    P3 = NodeId(NodeKind.PAPER, "P3")
    J1 = NodeId(NodeKind.JOURNAL, "J1")
    J2 = NodeId(NodeKind.JOURNAL, "J2")


def _author(raw: str) -> AuthorName:
    surname, _, given = raw.partition(",")
    return AuthorName(surname=surname.strip(), initials=given.strip()[:1], raw=raw)


def make_f1_records() -> list[PaperRecord]:
    ref_p2 = RawReference(
        source_short_title="J2", first_author="Bell, B", year=2002, start_page="10"
    )
    ref_p3 = RawReference(
        source_short_title="J1", first_author="Cole, C", year=2003, start_page="100"
    )
    return [
        PaperRecord(
            record_id="P1",
            title="Paper One",
            authors=[_author("Abel, A"), _author("Bell, B")],
            journal=JournalRef(short_title="J1", raw="J1"),
            year=2001,
            references=[ref_p2, ref_p3],
        ),
        PaperRecord(
            record_id="P2",
            title="Paper Two",
            authors=[_author("Bell, B"), _author("Cole, C")],
            journal=JournalRef(short_title="J2", raw="J2"),
            year=2002,
            references=[ref_p3],
        ),
        PaperRecord(
            record_id="P3",
            title="Paper Three",
            authors=[_author("Cole, C")],
            journal=JournalRef(short_title="J1", raw="J1"),
            year=2003,
            references=[],
        ),
    ]


@pytest.fixture
def f1_records() -> list[PaperRecord]:
    return make_f1_records()


@pytest.fixture
def f1_index(f1_records) -> CorpusIndex:
    return CorpusIndex.build(f1_records)


@pytest.fixture
def f1_graph(f1_records):
    return assemble(f1_records, BuildConfig(paper_layer_mode="citation"))


# Repository metadata record in the documented XML export subset.
SAMPLE_RECORD_XML = """\
<record>
  <header>
    <identifier>info:lanl-repo/i/0e08eefc-d053-11d8-85e1-d1cbfd475562</identifier>
    <datestamp>2004-07-07T20:20:14Z</datestamp>
    <setSpec>format:info*3Aalanl-repo*2Fpro*2Fisi</setSpec>
  </header>
  <metadata>
    <didl:DIDL xmlns:didl="urn:mpeg:mpeg21:2002:02-DIDL-NS">
      <didl:Resource mimeType="application/isi+xml">
        <citation>
          <title>The meaning of self-organization in computing</title>
          <author>
            <au>Heylighen, F</au>
            <au>Gershenson, C</au>
          </author>
          <journal>
            <issn>1094-7167</issn>
            <jtitle>IEEE INTELLIGENT SYSTEMS</jtitle>
            <stitle>IEEE INTELL SYST</stitle>
          </journal>
          <enumeration>
            <year>2003</year>
            <volume>18</volume>
            <issue>4</issue>
            <spage>72</spage>
            <epage>75</epage>
          </enumeration>
        </citation>
        <reference>
          <source>
            <stitle>P 13 EUR M CYB SYST</stitle>
            <author>BOLLEN, J</author>
            <spage>911</spage>
            <year>1996</year>
          </source>
        </reference>
        <reference>
          <source>
            <stitle>SWARM INTELLIGENCE</stitle>
            <author>BONABEAU, E</author>
            <year>1998</year>
          </source>
        </reference>
      </didl:Resource>
    </didl:DIDL>
  </metadata>
</record>
"""


@pytest.fixture
def sample_record_xml() -> str:
    return SAMPLE_RECORD_XML


@pytest.fixture
def oai_server():
    """Scripted HTTP endpoint: each queued entry answers one request, in order."""
    script: list[tuple[int, dict, str]] = []
    seen: list[dict] = []

    class Handler(BaseHTTPRequestHandler):
        def do_GET(self):
            seen.append(parse_qs(urlparse(self.path).query))
            status, headers, body = (
                script.pop(0) if script else (500, {}, "script exhausted")
            )
            payload = body.encode("utf-8")
            self.send_response(status)
            for key, value in headers.items():
                self.send_header(key, value)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    url = f"http://127.0.0.1:{server.server_address[1]}/oai"
    yield script, seen, url
    server.shutdown()
    server.server_close()
