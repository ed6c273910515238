"""
Basic test script to verify the lab works end to end
"""
import sys


def test_imports():
    """Test that all imports work correctly"""
    print("Testing imports...")

    from core.blaschke import BlaschkeProduct, probe_conditions  # noqa: F401
    print("✓ Blaschke imported")

    from core.fourier import FourierSymbol, taylor_coeffs  # noqa: F401
    print("✓ Fourier imported")

    from core.operators import toeplitz, submodule_projection  # noqa: F401
    print("✓ Operators imported")

    from core.polydisc import MultiBasis, product_of_inner_projections  # noqa: F401
    print("✓ Polydisc imported")

    from core.spectral import compactness_verdict  # noqa: F401
    print("✓ Spectral imported")

    from runners.probe_runner import ProbeRunner  # noqa: F401
    from runners.verify_runner import VerifyRunner  # noqa: F401
    print("✓ Runners imported")


def test_model_space():
    """Model projection of a degree-2 product has trace 2"""
    print("\nTesting model space...")
    import numpy as np

    from core.blaschke import BlaschkeProduct
    from core.operators import model_projection

    theta = BlaschkeProduct.from_zeros([0.3, -0.4])
    P = model_projection(theta, 16)
    trace = float(np.trace(P.matrix).real)
    print(f"✓ trace = {trace:.12f}")
    assert abs(trace - 2.0) < 1e-10


def test_full_pipeline(tmp_path):
    """Selftest command writes its report and exits 0"""
    print("\nTesting Full Pipeline...")
    from app import main

    code = main(["selftest", "--out", str(tmp_path)])
    report = tmp_path / "selftest" / "kernels" / "selftest_report.json"
    print(f"✓ exit code {code}, report at {report}")
    assert code == 0
    assert report.exists()


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    print("=" * 50)
    print("Hardy projection lab v1.0 - Basic Tests")
    print("=" * 50)

    ok = True
    for test in (test_imports, test_model_space):
        try:
            test()
        except Exception as e:
            print(f"\n❌ {test.__name__}: {e}")
            ok = False
    with tempfile.TemporaryDirectory() as out:
        try:
            test_full_pipeline(Path(out))
        except Exception as e:
            print(f"\n❌ test_full_pipeline: {e}")
            ok = False

    print("\n" + "=" * 50)
    if ok:
        print("✅ All tests passed!")
        sys.exit(0)
    print("❌ Some tests failed")
    sys.exit(1)
