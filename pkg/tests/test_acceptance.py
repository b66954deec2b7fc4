"""End-to-end acceptance suite.

Each test covers one release criterion at its stated tolerance and runtime
budget; the terminal summary (see conftest) prints one PASS/FAIL line per
criterion.  Everything here is exact arithmetic, no tolerances are loosened.
"""

import random
import time
import xml.etree.ElementTree as ET

import corpus_util as cu
from oracles import bellman_ford_levels, brute_pairs, union_find_components
from test_report_cli import check_links

from histograph import (
    build_network,
    citation_paths,
    cluster,
    cocitations,
    bibliographic_couplings,
    missing_links,
    outer_references,
    page_count,
    parse_export,
    rank_authors,
    reference_levels,
    render_missing_link,
)
from histograph.graph import layout, render, select_nodes
from histograph.network import matrix_rows
from histograph.report import RunConfig, write_bundle


def silent(*_args):
    pass


def test_c1_citation_matrix_fixture_exact(big_export_text):
    started = time.perf_counter()
    records = parse_export(big_export_text, on_warning=silent)
    net = build_network(records, on_warning=silent)

    expected_cited = dict(cu.BIG_CITED)
    expected_citing = dict(cu.BIG_CITING)
    for node_id, gcs in cu.BIG_GCS.items():
        node = net.node(node_id)
        assert node.gcs == gcs
        assert node.lcs == len(expected_citing.get(node_id, []))
        assert sorted(node.cited_nodes) == sorted(expected_cited.get(node_id, []))
        assert sorted(node.citing_nodes) == sorted(expected_citing.get(node_id, []))
    # spot-check the matrix row surface for the heavier node
    page_no = (4306 - 1) // 500 + 1
    page = matrix_rows(net, page_no, 500)
    row = page[4306 - 1 - (page_no - 1) * 500]
    assert row.label == "4306 1973 FRANCIS L"
    assert row.lcs == 22 and row.gcs == 111
    assert row.citing_nodes == sorted(cu.BIG_CITING[4306])

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c2_cocitation_witnesses(big_net):
    started = time.perf_counter()
    pairs = {(p.a, p.b): set(p.witnesses) for p in cocitations(big_net, min_strength=1)}
    witnesses = pairs[(4306, 4307)]
    assert {4717, 4903, 5380} <= witnesses
    brute = set(big_net.node(4306).citing_nodes) & set(big_net.node(4307).citing_nodes)
    assert witnesses == brute
    assert witnesses == set(cu.BIG_CITING[4306]) & set(cu.BIG_CITING[4307])
    # the shared citers are all strength >= 2 coupled with each other
    couplings = {(p.a, p.b): p.strength for p in bibliographic_couplings(big_net, min_strength=2)}
    common = sorted(brute)
    for i, a in enumerate(common):
        for b in common[i + 1 :]:
            assert couplings.get((a, b), 0) >= 2
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c3_missing_link_report():
    started = time.perf_counter()
    net = build_network(parse_export(cu.miss_links_export(), on_warning=silent))
    links = missing_links(net)
    assert len(links) == 2

    unpub, off_by_one = links
    assert unpub.cited_ref.raw == "SPIEGELMAN S, 1945, UNPUB BIOL B, V89"
    assert {"UNPUBLISHED_FORM", "PAGE_ABSENT"} <= unpub.reasons
    assert unpub.candidate_key == "SPIEGELMAN-S-1945-V89-P122"
    assert render_missing_link(unpub) == (
        f"SPIEGELMAN S, 1945, UNPUB BIOL B, V89 may refer to "
        f"[{unpub.candidate_node}] SPIEGELMAN-S-1945-V89-P122"
    )

    assert off_by_one.cited_ref.raw == "MILLER MA, 1946, BIOL B, V90, P121"
    assert off_by_one.reasons == {"PAGE_OFF_BY_ONE"}
    assert off_by_one.candidate_key == "MILLER-MA-1946-V90-P122"
    assert render_missing_link(off_by_one) == (
        f"MILLER MA, 1946, BIOL B, V90, P121 may refer to "
        f"[{off_by_one.candidate_node}] MILLER-MA-1946-V90-P122"
    )
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c4_outer_reference_ranking_and_partition():
    started = time.perf_counter()
    # 103 distinct nodes citing one outside work ranks it first
    records = []
    for i in range(103):
        records.append(cu.make_record(
            author=f"CITER{i:03d} Q", year=1960 + i % 40, volume=str(i + 1), page="1",
            refs=["LOWRY OH, 1951, J BIOL CHEM, V193, P265"], record_id=f"L{i}",
        ))
    records.append(cu.make_record(author="Z Z", year=1970, volume="300", page="1",
                                  refs=["SOKAL RR, 1981, BIOMETRY"], record_id="S"))
    report = outer_references(build_network(records), top_n=300)
    assert report.entries[0].key == "LOWRY-OH-1951-V193-P265"
    assert report.entries[0].local_cites == 103

    # partition invariant on 1000 random corpora
    rng = random.Random(0xC4)
    for _ in range(1000):
        net = build_network(cu.random_corpus(rng, max_records=50), on_warning=silent)
        rep = outer_references(net, top_n=10_000)
        total_refs = sum(len(n.record.cited_refs) for n in net.nodes)
        assert rep.total_occurrences + len(net.edges) == total_refs
        assert sum(e.local_cites for e in rep.entries) == rep.total_occurrences
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c5_degree_and_author_identities():
    started = time.perf_counter()
    rng = random.Random(0xC5)
    for _ in range(1000):
        net = build_network(cu.random_corpus(rng, max_records=50), on_warning=silent)
        # degree identities
        assert sum(n.lcs for n in net.nodes) == len(net.edges)
        assert sum(len(n.cited_nodes) for n in net.nodes) == len(net.edges)
        # adjacency antisymmetry
        for citing, cited in net.edges:
            assert cited in net.node(citing).cited_nodes
            assert citing in net.node(cited).citing_nodes
        # resolution partition: every reference is an edge or unresolved
        unresolved_count = len(net.unresolved)
        total_refs = sum(len(n.record.cited_refs) for n in net.nodes)
        assert len(net.edges) + unresolved_count == total_refs
        # author table identities
        rows = rank_authors(net, "pubs")
        by_id = {n.node_id: n for n in net.nodes}
        assert sum(r.pubs for r in rows) == sum(len(n.record.authors) for n in net.nodes)
        for row in rows:
            assert row.pubs == len(row.node_ids)
            assert row.tlcs == sum(by_id[i].lcs for i in row.node_ids)
            assert row.tgcs == sum(by_id[i].gcs for i in row.node_ids)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c6_brute_force_oracle_equivalence():
    started = time.perf_counter()
    for seed in range(200):
        rng = random.Random(seed)
        net = build_network(cu.random_corpus(rng, max_records=30), on_warning=silent)
        assert {(p.a, p.b): set(p.witnesses) for p in cocitations(net)} == \
            brute_pairs(net, "cocitation", 1)
        assert {(p.a, p.b): set(p.witnesses) for p in bibliographic_couplings(net)} == \
            brute_pairs(net, "coupling", 1)
        for mode, kind in (("cited", "cocitation"), ("citing", "coupling")):
            expected = union_find_components(brute_pairs(net, kind, 2).keys())
            assert cluster(net, mode, min_strength=2) == expected
        for node in net.nodes:
            assert reference_levels(net, node.node_id).levels == \
                bellman_ford_levels(net, node.node_id)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c7_historiograph_laws(big_net):
    started = time.perf_counter()
    # area ratio equals metric ratio within 1% (pre-clamp radii)
    spec = select_nodes(big_net, 13)
    assert spec.selected == [4306, 4307]
    ratio = spec.radii_raw[4307] ** 2 / spec.radii_raw[4306] ** 2
    assert abs(ratio - 31 / 22) <= 0.01 * (31 / 22)

    # selection monotone over a threshold sweep
    previous = None
    for threshold in (0, 1, 2, 6, 13, 31, 32):
        selected = set(select_nodes(big_net, threshold).selected)
        if previous is not None:
            assert selected <= previous
        previous = selected
    assert previous == set()  # nothing reaches lcs 32

    # band order strictly increasing with year on a multi-year graph
    records = [
        cu.make_record(author=f"Y{y} A", year=y, volume=str(y), page="1",
                       refs=[cu.cr_string(f"Y{y - 1} A", y - 1, str(y - 1), "1")] if y > 1950 else [])
        for y in range(1950, 1958)
    ]
    toy = layout(select_nodes(build_network(records), 0))
    years = {n: y for y, ids in toy.year_rows.items() for n in ids}
    for a in toy.selected:
        for b in toy.selected:
            if years[a] < years[b]:
                assert toy.positions[a][1] < toy.positions[b][1]

    # SVG is well-formed XML and rendering is byte-deterministic
    positioned = layout(spec)
    svg = render(positioned, "svg")
    ET.fromstring(svg)
    again = render(layout(select_nodes(big_net, 13)), "svg")
    assert svg == again
    assert render(positioned, "dot") == render(positioned, "dot")
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c8_reference_level_walkthrough(webster_net):
    started = time.perf_counter()
    origin = cu.WEBSTER_ORIGIN
    levels = reference_levels(webster_net, origin).levels
    assert levels[0] == set(cu.WEBSTER_CITED)
    assert len(levels) == 1  # deeper targets are already directly cited

    paths = citation_paths(webster_net, origin)
    assert (origin, 4167, 3342) in paths
    assert (origin, 4167, 3342, 3281) in paths
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"criterion budget exceeded: {elapsed:.2f}s"


def test_c9_report_bundle_pagination_links(big_net, tmp_path):
    started = time.perf_counter()
    config = RunConfig(output_dir=str(tmp_path), page_size=500)
    written = write_bundle(big_net, config)
    matrix_pages = sorted(p.name for p in tmp_path.glob("matrix-*.html"))
    assert len(matrix_pages) == 18
    assert page_count(len(big_net.nodes), 500) == 18
    assert (tmp_path / "index.html").exists()
    assert check_links(tmp_path) > 0
    assert written[-1].name == "index.html"
    # the bundle's matrix row for the lcs-22 node lists exactly its citers
    import re

    page_with_4306 = (tmp_path / "matrix-9.html").read_text(encoding="utf-8")
    row_html = page_with_4306.split('<tr id="node-4306">')[1].split("</tr>")[0]
    shown = {int(m) for m in re.findall(r"#node-(\d+)", row_html)}
    assert shown == set(cu.BIG_CITING[4306]) | set(cu.BIG_CITED[4306])
    # every node appears on exactly one page
    total_rows = 0
    for page in range(1, 19):
        total_rows += len(matrix_rows(big_net, page, 500))
    assert total_rows == 8884
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"criterion budget exceeded: {elapsed:.2f}s"
