from pathlib import Path

# Collection of Path Objects to be used for file access

ROOT_DIR = Path(__file__).parent

LIB_DIR = ROOT_DIR / "lib"  # Code directory

DATA_DIR = ROOT_DIR / "data"  # Contains all input and output files
SPECS_DIR = DATA_DIR / "specs"  # job and resource_matrix files
CONFIG_DIR = DATA_DIR / "configs"  # Experiment configs
RESULTS_DIR = DATA_DIR / "results"  # Metrics, checkpoints and charts per experiment
