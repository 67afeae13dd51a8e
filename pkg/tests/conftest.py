import json
from pathlib import Path

import pytest

from qpmkit import ProcessSpec, load_model

REPO_ROOT = Path(__file__).resolve().parent.parent
CRYSTAL_DB = REPO_ROOT / "crystals"


def axis_entry(constant, resonances=(), polynomials=()):
    return {
        "constant": constant,
        "resonance_terms": [
            {"p": p, "q": q, "shape": shape} for p, q, shape in resonances
        ],
        "polynomial_terms": [{"coeff": c, "power": k} for c, k in polynomials],
    }


def make_doc(crystal_id, axes, thermo=None, lam_window=(0.5, 2.0), temp_window=(0.0, 100.0), t_ref=20.0):
    doc = {
        "crystal_id": crystal_id,
        "reference_temperature_c": t_ref,
        "wavelength_window_um": list(lam_window),
        "temperature_window_c": list(temp_window),
        "provenance": "synthetic test fixture",
        "axes": axes,
    }
    if thermo:
        doc["thermo_optic"] = thermo
    return doc


def constant_doc(n=2.0, crystal_id="synthetic-flat"):
    """Dispersionless crystal: n identical on both axes at every wavelength."""
    entry = axis_entry(n * n)
    return make_doc(crystal_id, {"Y": entry, "Z": entry}, lam_window=(0.4, 2.5))


def single_resonance_doc():
    """n^2 = 4 + 0.25 lambda^2/(lambda^2 - 0.04); pole at 0.2 um, window [0.5, 2]."""
    entry = axis_entry(4.0, resonances=[(0.25, 0.04, "lambda2_over")])
    return make_doc("synthetic-single-res", {"Y": entry, "Z": entry})


def plateau_doc():
    """Both axes hit n(0.8) = 2.2 and n(1.6) = 2.0 exactly (single inverse resonance)."""
    entry = axis_entry(3.7375, resonances=[(0.6615, 0.04, "inverse")])
    return make_doc("synthetic-plateau", {"Y": entry, "Z": entry})


def _fit_two_point(n_a, n_b, lam_a=0.75, lam_b=1.5, q=0.04):
    """Single-inverse-resonance axis through (lam_a, n_a) and (lam_b, n_b)."""
    d_a, d_b = lam_a**2 - q, lam_b**2 - q
    p = (n_a**2 - n_b**2) / (1.0 / d_a - 1.0 / d_b)
    constant = n_a**2 - p / d_a
    return axis_entry(constant, resonances=[(p, q, "inverse")])


def triple_cross_doc():
    """YZY:1, ZZZ:2 and ZYY:7 all phase-match with a 40 um grating at 1.5 um.

    Index targets solve the three period equations simultaneously:
      n_Z(0.75) - n_Z(1.5)              = 1.5 * 2 / (2 * 40)
      n_Z(0.75) - n_Y(1.5)              = 1.5 * 7 / (2 * 40)
      2 n_Y(0.75) - n_Z(1.5) - n_Y(1.5) = 1.5 / 40
    """
    nz075 = 2.2
    nz15 = nz075 - 1.5 * 2 / (2 * 40.0)
    ny15 = nz075 - 1.5 * 7 / (2 * 40.0)
    ny075 = 0.5 * (1.5 / 40.0 + nz15 + ny15)
    return make_doc(
        "synthetic-triple-cross",
        {"Y": _fit_two_point(ny075, ny15), "Z": _fit_two_point(nz075, nz15)},
    )


def thermo_linear_doc():
    """Axis Z carries a linear-in-T, 1/lambda-shaped thermo slope sized so the
    ZZZ:1 and YYY:1 grating-period curves cross at 1.5 um exactly at T = 50 C."""
    y_entry = _fit_two_point(2.1, 2.08125)
    nz075 = 2.2
    nz15 = nz075 - 1.5 / (2 * 38.0)
    z_entry = _fit_two_point(nz075, nz15)
    # denominator(T) = 1.5/38 + 2 c dT (2/1.5 - 1/1.5); want 1.5/40 at dT = 30
    c = (1.5 / 40.0 - 1.5 / 38.0) / (2.0 * (1.0 / 0.75 - 1.0 / 1.5) * 30.0)
    thermo = {"Z": {"linear_poly": [0.0, c]}}
    return make_doc("synthetic-thermo", {"Y": y_entry, "Z": z_entry}, thermo=thermo)


@pytest.fixture(scope="session")
def db_dir():
    return CRYSTAL_DB


@pytest.fixture(scope="session")
def kato(db_dir):
    from qpmkit import load_crystal

    return load_crystal(db_dir, "ktp-kato")


@pytest.fixture(scope="session")
def emanueli(db_dir):
    from qpmkit import load_crystal

    return load_crystal(db_dir, "ktp-emanueli")


@pytest.fixture(scope="session")
def constant_model():
    return load_model(constant_doc())


@pytest.fixture(scope="session")
def single_resonance_model():
    return load_model(single_resonance_doc())


@pytest.fixture(scope="session")
def plateau_model():
    return load_model(plateau_doc())


@pytest.fixture(scope="session")
def triple_cross_model():
    return load_model(triple_cross_doc())


@pytest.fixture(scope="session")
def thermo_linear_model():
    return load_model(thermo_linear_doc())


@pytest.fixture(scope="session")
def yzy():
    return ProcessSpec.from_triple("YZY", 1)


@pytest.fixture(scope="session")
def zzz2():
    return ProcessSpec.from_triple("ZZZ", 2)


@pytest.fixture(scope="session")
def zyy7():
    return ProcessSpec.from_triple("ZYY", 7)


@pytest.fixture(scope="session")
def trio(yzy, zzz2, zyy7):
    return (yzy, zzz2, zyy7)


@pytest.fixture(scope="session")
def service_client(db_dir):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from qpmkit.service import create_app

    client = TestClient(create_app(db_dir))
    yield client
    client.close()


@pytest.fixture()
def tmp_db(tmp_path):
    """Throwaway database: the shipped crystals plus a dispersionless synthetic one."""
    for name in ("ktp-kato.json", "ktp-emanueli.json"):
        (tmp_path / name).write_text((CRYSTAL_DB / name).read_text())
    (tmp_path / "synthetic-flat.json").write_text(json.dumps(constant_doc()))
    return tmp_path
