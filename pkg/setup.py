"""
Setup script for the martingale bounds toolkit.
Checks that the dependencies are installed and the project structure is complete.
"""

import os
import sys
from importlib.util import find_spec


def check_dependencies():
    """Check if required dependencies are installed."""
    required_packages = [
        'numpy',
        'scipy',
        'pandas',
        'pydantic',
        'pytest',
        'pytest-mock',
        'hypothesis',
        'mpmath',
    ]

    missing_packages = []

    for package in required_packages:
        module = 'pytest_mock' if package == 'pytest-mock' else package
        if find_spec(module) is None:
            missing_packages.append(package)

    if missing_packages:
        print(f"❌ Missing packages: {', '.join(missing_packages)}")
        print("Run: pip install -r requirements.txt")
        return False
    else:
        print("✅ All required packages are installed")
        return True


def validate_structure():
    """Validate the project structure."""
    required_files = [
        'src/__init__.py',
        'src/errors.py',
        'src/cli.py',
        'src/config/__init__.py',
        'src/config/settings.py',
        'src/core/__init__.py',
        'src/core/exponents.py',
        'src/core/generalized_bound.py',
        'src/core/simulator.py',
        'src/core/exact_oracle.py',
        'src/utils/__init__.py',
        'src/utils/numerics.py',
        'src/utils/statistics.py',
        'src/utils/reporting.py',
        'app.py',
        'pytest.ini',
        'requirements.txt',
        'README.md'
    ]

    missing_files = [file_path for file_path in required_files if not os.path.exists(file_path)]

    if missing_files:
        print(f"❌ Missing files: {', '.join(missing_files)}")
        return False
    else:
        print("✅ Project structure is valid")
        return True


def main():
    """Main setup function."""
    print("🚀 Martingale Bounds Toolkit Setup")
    print("=" * 40)

    deps_ok = check_dependencies()
    structure_ok = validate_structure()

    print("\n" + "=" * 40)

    if deps_ok and structure_ok:
        print("✅ Setup completed successfully!")
        print("\nNext steps:")
        print("1. Run the tests: python tests/run_all_tests.py")
        print("2. Try a bound: python app.py compute --theorem 1 --gamma 0.5 --delta 0.5 --n 100")
    else:
        print("❌ Setup incomplete. Please fix the issues above.")
        sys.exit(1)


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invoked by a build frontend (pip/setuptools): metadata lives in pyproject.toml.
        from setuptools import setup
        setup()
    else:
        main()
