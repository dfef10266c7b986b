import sys
from pathlib import Path

# test helpers (markets, oracles) live next to the tests
sys.path.insert(0, str(Path(__file__).parent))

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO_ROOT / "fixtures"
