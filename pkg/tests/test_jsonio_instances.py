import numpy as np
import pytest

from logahoric import jsonio, smallmat as sm
from logahoric.exactnum import QQi
from logahoric.instances import random_orbit, scrambled_connection
from logahoric.liecore import GroupSpec
from logahoric.loopconn import membership_A_theta, weight_zero_part
from logahoric.rhmap import from_betti, to_betti


def test_scalar_roundtrip():
    from fractions import Fraction as F
    for x in (QQi(F(1, 3), F(-2, 7)), F(5, 4), 1.25 + 0.5j, 0.75):
        enc = jsonio.encode_scalar(x)
        dec = jsonio.decode_scalar(enc)
        assert complex(dec) == complex(x)


def test_connection_roundtrip():
    rng = np.random.default_rng(11)
    orb = random_orbit(rng, GroupSpec("GL", 2))
    _, _, a0 = scrambled_connection(rng, orb)
    dec = jsonio.decode_connection(jsonio.encode_connection(a0))
    assert dec.max_abs_diff(a0) == 0
    assert dec.truncation == a0.truncation
    th = jsonio.decode_weight(jsonio.encode_weight(orb.theta))
    assert th.entries == orb.theta.entries


def test_malformed_input_raises():
    with pytest.raises(jsonio.JSONFormatError):
        jsonio.load_file("/nonexistent/path.json")
    import tempfile, os
    fd, path = tempfile.mkstemp(suffix=".json")
    os.write(fd, b"this is not json")
    os.close(fd)
    try:
        with pytest.raises(jsonio.JSONFormatError):
            jsonio.load_file(path)
    finally:
        os.unlink(path)


def test_seeded_roundtrips():
    rng = np.random.default_rng(11)
    for trial in range(6):
        spec = GroupSpec("GL", 2 if trial % 2 == 0 else 3)
        orb = random_orbit(rng, spec)
        a, word, _ = scrambled_connection(rng, orb)
        assert membership_A_theta(a, orb.theta, tol=0.0).ok
        assert word.certify(orb.theta)[0]
        datum = to_betti(a, orb.theta, orb.orbit_rep())
        a2, th2 = from_betti(datum.m, datum.phi, datum.tau, datum.sigma)
        _, b2 = weight_zero_part(a2, th2)
        datum2 = to_betti(a2, th2, b2)
        assert sm.max_abs(sm.msub(datum2.m, datum.m)) < 1e-8
        assert datum2.phi.entries == datum.phi.entries
