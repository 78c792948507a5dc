import sys
from pathlib import Path

# flat top-level modules, imported as `import gates`, `from pipeline import verify`
sys.path.insert(0, str(Path(__file__).resolve().parent))
