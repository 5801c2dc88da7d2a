"""Deployment simulator: item encoding, store semantics, end-to-end runs."""

import os
import random

import pytest

from mcfe_si.harness import (
    AlignmentConfig,
    CiphertextStore,
    CorruptRecordError,
    ItemCodec,
    MissingRecordError,
    StoreRecord,
    encode_item,
    make_tag,
    read_item_file,
    run_alignment,
)
from mcfe_si.oracle import sif


def test_encode_item_deterministic(ctx):
    assert encode_item(ctx, b"id-1") == encode_item(ctx, b"id-1")
    assert encode_item(ctx, b"id-1") != encode_item(ctx, b"id-2")
    with pytest.raises(ValueError):
        encode_item(ctx, b"")


def test_item_and_tag_domains_disjoint(ctx):
    assert encode_item(ctx, b"round-1") != make_tag(ctx, "round-1")


def test_item_codec(ctx):
    codec = ItemCodec(ctx)
    e = codec.encode(b"hello")
    assert codec.decode(e) == b"hello"
    assert codec.decode(ctx.gt ** 12345) is None


def test_store_round_trip(tmp_path):
    store = CiphertextStore(str(tmp_path / "store"))
    store.upload(StoreRecord(1, "jan", ("a",), b"payload-1"))
    rec = store.fetch(1, "jan")
    assert rec.ct_bytes == b"payload-1"
    assert rec.attr_labels == ("a",)

    with pytest.raises(MissingRecordError):
        store.fetch(2, "jan")
    with pytest.raises(MissingRecordError):
        store.fetch(1, "feb")


def test_store_replace_keeps_single_record(tmp_path):
    store = CiphertextStore(str(tmp_path / "store"))
    store.upload(StoreRecord(1, "jan", ("a",), b"old"))
    store.upload(StoreRecord(1, "jan", ("a", "b"), b"new"))
    assert store.fetch(1, "jan").ct_bytes == b"new"
    files = [f for f in os.listdir(str(tmp_path / "store")) if f.endswith(".ct")]
    assert len(files) == 1


def test_store_detects_tampering(tmp_path):
    root = tmp_path / "store"
    store = CiphertextStore(str(root))
    store.upload(StoreRecord(1, "jan", ("a",), b"payload"))
    (path,) = [root / f for f in os.listdir(root) if f.endswith(".ct")]
    path.write_bytes(b"tampered")
    with pytest.raises(CorruptRecordError):
        store.fetch(1, "jan")


def test_read_item_file(tmp_path):
    p = tmp_path / "items.txt"
    p.write_text("alice\n\nbob \ncarol\n", encoding="utf-8")
    assert read_item_file(str(p)) == [b"alice", b"bob", b"carol"]
    p.write_text("\n\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_item_file(str(p))
    p.write_text("alice\nalice\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_item_file(str(p))


def _write_items(path, ids):
    path.write_text("\n".join(ids) + "\n", encoding="utf-8")
    return str(path)


def test_alignment_matches_brute_force(ctx, tmp_path):
    files = [
        _write_items(tmp_path / "c1.txt", ["p1", "p2", "p3"]),
        _write_items(tmp_path / "c2.txt", ["p2", "p3", "p4"]),
    ]
    report = run_alignment(AlignmentConfig(
        workdir=str(tmp_path / "w"), d=4, item_files=files,
        attrs=["ok"], label="jan", policy="ok AND NOT banned",
        pair=(1, 2), seed=41), ctx)
    assert report.outcome == "ok"
    got = {item for _, _, item in report.matches}
    expected = sif([{"p1", "p2", "p3"}, {"p2", "p3", "p4"}], {(1, 2)})[0]
    assert got == expected
    assert "total: 2" in report.format()


def test_alignment_empty_overlap(ctx, tmp_path):
    files = [
        _write_items(tmp_path / "c1.txt", ["p1"]),
        _write_items(tmp_path / "c2.txt", ["p9"]),
    ]
    report = run_alignment(AlignmentConfig(
        workdir=str(tmp_path / "w"), d=3, item_files=files,
        attrs=["ok"], label="jan", policy="ok", pair=(1, 2), seed=42), ctx)
    assert report.outcome == "ok"
    assert report.matches == []


def test_alignment_policy_unsatisfied(ctx, tmp_path):
    files = [
        _write_items(tmp_path / "c1.txt", ["p1"]),
        _write_items(tmp_path / "c2.txt", ["p1"]),
    ]
    report = run_alignment(AlignmentConfig(
        workdir=str(tmp_path / "w"), d=3, item_files=files,
        attrs=["banned"], label="jan", policy="NOT banned",
        pair=(1, 2), seed=43), ctx)
    assert report.outcome == "policy-unsatisfied"
    assert report.matches == []


def test_alignment_seeded_reproducible(ctx, tmp_path):
    files = [
        _write_items(tmp_path / "c1.txt", ["p1", "p2"]),
        _write_items(tmp_path / "c2.txt", ["p2"]),
    ]
    cfg = dict(d=3, item_files=files, attrs=["ok"], label="jan",
               policy="ok", pair=(1, 2), seed=44)
    r1 = run_alignment(AlignmentConfig(workdir=str(tmp_path / "w1"), **cfg), ctx)
    r2 = run_alignment(AlignmentConfig(workdir=str(tmp_path / "w2"), **cfg), ctx)
    assert r1.format() == r2.format()
    assert r1.matches == [(1, 0, "p2")]
