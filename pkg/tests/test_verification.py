import pytest

from src.models.atlas import RegimeVerdict
from src.utils.exponent_atlas import classify_singular_stability, in_existence_range, make_params
from src.utils.verification import HETEROCLINIC_TRIPLES, check_heteroclinic


def test_heteroclinic_triples_cover_both_regimes():
    assert len(HETEROCLINIC_TRIPLES) == len(set(HETEROCLINIC_TRIPLES)) == 20
    verdicts = []
    for N, nu, p in HETEROCLINIC_TRIPLES:
        params = make_params(N, nu, p)
        assert in_existence_range(params) and params.p > params.p_sobolev
        verdicts.append(classify_singular_stability(params))
    assert verdicts.count(RegimeVerdict.STABLE) == 10
    assert verdicts.count(RegimeVerdict.UNSTABLE) == 10


@pytest.mark.parametrize('triple', [(18, 8.0, 3.0), (12, 5.0, 2.0)])
def test_added_triples_meet_the_asymptotic_gates(triple, opts):
    outcome = check_heteroclinic(opts, [triple])
    assert outcome['passed'], outcome['detail']
