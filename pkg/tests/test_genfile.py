import pytest

from regugen.galois import make_field
from regugen.genfile import GenFileError, dump_generators, parse_generators
from regugen.matrices import Matrix
from regugen.perms import Perm
from regugen.witnesses import get_witness


def test_matrix_round_trip_over_gf9():
    w = get_witness("sp6-9")
    env = w.environment()
    mats = [env[n] for n in ("x", "y")]
    text = dump_generators(mats, ["x", "y"], group="Sp(6,9)")
    back = parse_generators(text)
    assert back.group == "Sp(6,9)"
    assert back.generators() == mats
    assert parse_generators(dump_generators(back.generators(), ["x", "y"], "Sp(6,9)")).generators() == mats


def test_perm_lines_and_comments():
    text = "# Alt(8) pair\nperm: g (1,2,3,4)(5,6)\nperm: (2,5,8,4,6,3,7)  # t\n"
    f = parse_generators(text)
    assert f.named()["g"] == Perm.from_cycles("(1,2,3,4)(5,6)")
    assert len(f.generators()) == 2


def test_field_expressions_in_rows():
    F = make_field(3, 2)
    f = parse_generators("field 3 2\ndim 2\nmat: a\n1, b\n0, 1\n")
    assert f.named()["a"] == Matrix.from_rows(F, [[1, "b"], [0, 1]])


@pytest.mark.parametrize(
    "text",
    ["mat: a\n1,0\n0,1\n", "field 2 1\ndim 2\nmat: a\n1,0\n", "field 2 1\ndim 2\nmat: a\n1,0,0\n0,1,0\n",
     "perm: g (1,2"],
)
def test_malformed_files_rejected(text):
    with pytest.raises(GenFileError):
        parse_generators(text)
