"""Configuration files, figure sweeps and the command-line interface."""
from .config import ScenarioConfig, default_config, dumps_config, load_config, loads_config
from .figures import Table, run_figure, run_figure3, run_figure4, run_figure5
