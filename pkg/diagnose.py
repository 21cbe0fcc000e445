"""
Diagnostic Script for the signed-sum laboratory
Run this if the CLI or the tests fail to start
"""

import sys
import os
import importlib

print("=" * 70)
print("  DIAGNOSTIC SCRIPT - Signed Sums and Circumradii")
print("=" * 70)
print()

# Check Python version
print("1. Checking Python version...")
python_version = sys.version_info
print(f"   Python {python_version.major}.{python_version.minor}.{python_version.micro}")
if python_version < (3, 9):
    print("   ⚠️  WARNING: Python 3.9+ required")
else:
    print("   ✓ Python version OK")
print()

# Check required packages
print("2. Checking required packages...")
required_packages = {
    'numpy': 'NumPy',
    'scipy': 'SciPy (optimizer)',
    'pydantic': 'Pydantic',
    'dotenv': 'python-dotenv',
    'pandas': 'pandas (CSV reports)',
    'tqdm': 'tqdm (progress bars)',
}

test_packages = {
    'pytest': 'pytest',
    'hypothesis': 'Hypothesis (property tests)',
}

missing_required = []
missing_test = []

for package, name in required_packages.items():
    try:
        importlib.import_module(package)
        print(f"   ✓ {name}")
    except ImportError:
        print(f"   ✗ {name} - MISSING (REQUIRED)")
        missing_required.append(package)

for package, name in test_packages.items():
    try:
        importlib.import_module(package)
        print(f"   ✓ {name}")
    except ImportError:
        print(f"   ⚠️  {name} - MISSING (needed for tests only)")
        missing_test.append(package)

print()

# Check fixtures and output directory
print("3. Checking data directories...")
root = os.path.dirname(os.path.abspath(__file__))
fixtures = os.path.join(root, "data", "fixtures")
if os.path.isdir(fixtures):
    print(f"   ✓ {len(os.listdir(fixtures))} fixtures in data/fixtures")
else:
    print("   ✗ data/fixtures is missing (verify will fail)")
os.makedirs(os.path.join(root, "output"), exist_ok=True)
print("   ✓ Output directory ready")
print()

# Test module imports
print("4. Testing core modules...")
sys.path.insert(0, os.path.join(root, 'src'))
modules = [
    'lab_config', 'geom2d', 'circumball', 'zonotope', 'bounds',
    'optimizer', 'instances', 'report_storage', 'verification_suites', 'cli',
]
broken = []
for module in modules:
    try:
        importlib.import_module(module)
        print(f"   ✓ {module}")
    except Exception as e:
        print(f"   ✗ {module}: {e}")
        broken.append(module)

print()

# Summary
print("=" * 70)
print("  DIAGNOSTIC COMPLETE")
print("=" * 70)
print()

if missing_required:
    print("⚠️  ACTION REQUIRED: Install missing required packages")
    print("   pip install -r requirements.txt")
elif broken:
    print(f"⚠️  {len(broken)} module(s) failed to import: {', '.join(broken)}")
else:
    print("✓ All required packages installed!")
    print()
    print("You can now run:")
    print("   python src/run_demo.py")
    print("   python src/cli.py verify --count 20")
    print()

if missing_test:
    print("💡 TIP: To run the test suite, install:")
    print(f"   pip install {' '.join(missing_test)}")
