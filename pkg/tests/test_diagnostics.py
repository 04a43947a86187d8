"""Completeness/coherence diagnostics."""

from __future__ import annotations

import pytest

from gluesem.errors import MissingEntryError
from gluesem.diagnostics import (
    INCOHERENT,
    INCOMPLETE,
    INCOMPLETE_INCOHERENT,
    OK,
    UNINSTANTIABLE,
    diagnose,
)
from gluesem.fstruct import parse_fstructure

from conftest import load_fs


def test_well_formed_is_ok_with_readings(lexicon, bah):
    diagnosis = diagnose(bah, lexicon)
    assert diagnosis.status == OK
    assert len(diagnosis.readings) == 1


def test_unsaturated_transitive_is_incomplete(lexicon):
    # OBJ present but contributing no meaning: the verb's demand goes unmet.
    fs = load_fs("john_devoured.fs")
    diagnosis = diagnose(fs, lexicon)
    assert diagnosis.status == INCOMPLETE
    assert any(d.sem == "h" and d.ty == "e" for d in diagnosis.unsatisfied_demands)
    assert any("devoured" in tag for d in diagnosis.unsatisfied_demands for tag in d.needed_by)
    assert diagnosis.leftover_resources == ()


def test_missing_obj_attribute_is_uninstantiable(lexicon):
    fs = load_fs("john_devoured_no_obj.fs")
    diagnosis = diagnose(fs, lexicon)
    assert diagnosis.status == UNINSTANTIABLE
    assert "OBJ" in diagnosis.note


def test_extra_arguments_are_incoherent(lexicon):
    fs = load_fs("john_arrived_extras.fs")
    diagnosis = diagnose(fs, lexicon)
    assert diagnosis.status == INCOHERENT
    leftovers = {l.word for l in diagnosis.leftover_resources}
    assert leftovers == {"bill", "sink"}
    assert diagnosis.unsatisfied_demands == ()


def test_adding_unrelated_premise_flips_ok_to_incoherent(lexicon):
    fs = parse_fstructure(
        "f:[PRED 'appoint'; SUBJ g:[PRED 'Bill']; OBJ h:[PRED 'Hillary'];"
        " ADJ i:[PRED 'sink']]"
    )
    diagnosis = diagnose(fs, lexicon)
    assert diagnosis.status == INCOHERENT
    assert [l.word for l in diagnosis.leftover_resources] == ["sink"]


def test_removing_consumed_premise_flips_ok_to_incomplete(lexicon):
    fs = parse_fstructure("f:[PRED 'appoint'; SUBJ g:[PRED 'Bill']; OBJ h:[]]")
    diagnosis = diagnose(fs, lexicon)
    assert diagnosis.status == INCOMPLETE
    assert any(d.sem == "h" for d in diagnosis.unsatisfied_demands)


def test_combined_status_both_kinds_of_evidence(lexicon):
    fs = parse_fstructure(
        "f:[PRED 'devour'; SUBJ g:[PRED 'John']; OBJ h:[]; ADJ i:[PRED 'sink']]"
    )
    diagnosis = diagnose(fs, lexicon)
    assert diagnosis.status == INCOMPLETE_INCOHERENT
    assert any(d.sem == "h" for d in diagnosis.unsatisfied_demands)
    assert [l.word for l in diagnosis.leftover_resources] == ["sink"]


def test_never_ok_with_empty_derivation(lexicon):
    fs = load_fs("john_devoured.fs")
    assert diagnose(fs, lexicon).status != OK


def test_missing_entry_propagates(lexicon):
    fs = parse_fstructure("f:[PRED 'vanish'; SUBJ g:[PRED 'Bill']]")
    with pytest.raises(MissingEntryError):
        diagnose(fs, lexicon)


def test_ok_carries_all_readings(lexicon, scope_fs):
    diagnosis = diagnose(scope_fs, lexicon)
    assert diagnosis.status == OK
    assert len(diagnosis.readings) == 2
