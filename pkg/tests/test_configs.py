"""Policy compilation: golden structural dumps and the sublist grammar."""

import itertools

import pytest

from sasplan.configs import (
    KNOWN_CONFIG_NAMES,
    NoveltyComponent,
    SublistSpec,
    UnknownConfig,
    ValueComponent,
    compile_policy,
    dump_policy,
)

GOLDEN_LAMA = """\
policy lama
boost 1000
sublist 0: key <hff, g>; admits all
sublist 1: key <hff, g>; admits preferred-only
sublist 2: key <hlm, g>; admits all
sublist 3: key <hlm, g>; admits preferred-only
"""

GOLDEN_BFWS_F6 = """\
policy bfws-f6
no boosting
sublist 0: key <w{hlm,hff}, 1-pref, hlm, w{hff}, hff, g>; admits all
"""

GOLDEN_NOLAN = """\
policy nolan
boost 1000
sublist 0: key <hff, g>; admits all
sublist 1: key <hff, g>; admits preferred-only
sublist 2: key <hlm, g>; admits preferred-only
sublist 3: key <w{hlm}, hlm, g>; admits all
"""


@pytest.mark.parametrize(
    "name,golden",
    [("lama", GOLDEN_LAMA), ("bfws-f6", GOLDEN_BFWS_F6), ("nolan", GOLDEN_NOLAN)],
)
def test_golden_dumps(name, golden):
    assert dump_policy(compile_policy(name)) == golden


def test_every_known_name_compiles():
    for name in KNOWN_CONFIG_NAMES:
        spec = compile_policy(name)
        assert spec.name == name
        assert len(spec.sublists) >= 1


def test_single_sublist_configs_have_no_boosting():
    for name in ("bfws-f2", "bfws-f4", "bfws-f6"):
        spec = compile_policy(name)
        assert len(spec.sublists) == 1
        assert spec.boost_amount == 0
        assert not spec.sublists[0].preferred_only


def test_lama_w_variants_extend_lama():
    lama = compile_policy("lama").sublists
    for name in ("lama-w-f6", "lama-w-f4", "lama-w-f2-ff", "lama-w-f2-lm",
                 "lama-w-wff", "lama-w-wlm", "lama-w-w"):
        spec = compile_policy(name)
        assert spec.sublists[:4] == lama
        assert len(spec.sublists) == 5
        assert spec.boost_amount == 1000
        assert not spec.sublists[4].preferred_only


def test_novelty_list_keys():
    f2_lm = compile_policy("lama-w-f2-lm").sublists[4]
    assert f2_lm.components == (NoveltyComponent(("hlm",)), ValueComponent("hlm"))
    w_plain = compile_policy("lama-w-w").sublists[4]
    assert w_plain.components == (NoveltyComponent(()),)
    f2_ff = compile_policy("bfws-f2").sublists[0]
    assert f2_ff.components == (NoveltyComponent(("hff",)), ValueComponent("hff"))


def test_evaluator_requirements():
    assert not compile_policy("bfws-f2").uses_hlm
    assert not compile_policy("bfws-f2").needs_pref
    assert compile_policy("bfws-f4").uses_hlm
    assert not compile_policy("bfws-f4").needs_pref
    assert compile_policy("bfws-f6").needs_pref
    assert compile_policy("lama").needs_pref
    assert compile_policy("nolan").uses_hlm


def test_unknown_config_rejected():
    with pytest.raises(UnknownConfig):
        compile_policy("bogus")
    with pytest.raises(UnknownConfig):
        compile_policy("alt:hff,hff")  # duplicate
    with pytest.raises(UnknownConfig):
        compile_policy("alt:")


def test_ablation_grammar_requires_f2hlm():
    with pytest.raises(UnknownConfig):
        compile_policy("alt:hff,hff+,hlm,hlm+")


def test_sixteen_ablations_include_f2hlm():
    """Every subset of the four plain sublists, plus the mandatory
    novelty sublist."""
    atoms = ("hff", "hff+", "hlm", "hlm+")
    count = 0
    for r in range(5):
        for subset in itertools.combinations(atoms, r):
            name = "alt:" + ",".join(subset + ("f2hlm",))
            spec = compile_policy(name)
            count += 1
            assert spec.sublists[-1] == SublistSpec(
                (NoveltyComponent(("hlm",)), ValueComponent("hlm"))
            )
            assert len(spec.sublists) == len(subset) + 1
    assert count == 16


def test_nolan_equals_its_ablation():
    nolan = compile_policy("nolan")
    ablation = compile_policy("alt:hff,hff+,hlm+,f2hlm")
    assert nolan.sublists == ablation.sublists
    assert nolan.boost_amount == ablation.boost_amount
