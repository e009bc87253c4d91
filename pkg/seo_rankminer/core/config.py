import os
import sys
from dotenv import load_dotenv
from . import constants

# Load environment variables from .env file
load_dotenv()

# Run configuration file (TOML); the --config flag takes precedence
CONFIG_PATH = os.environ.get("SEO_RANKMINER_CONFIG")

# HTTP identity
USER_AGENT = os.environ.get("SEO_RANKMINER_USER_AGENT", constants.DEFAULT_USER_AGENT)

# Live search client credentials - optional, fixtures are used when absent
GOOGLE_CSE_API_KEY = os.environ.get("GOOGLE_CSE_API_KEY")
GOOGLE_CSE_ENGINE_ID = os.environ.get("GOOGLE_CSE_ENGINE_ID")

# Logging configuration
LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()
LOG_FILE = os.environ.get("LOG_FILE", "")  # empty disables the file handler
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_MAX_SIZE_MB = int(os.environ.get("LOG_MAX_SIZE_MB", "5"))  # Maximum log file size in MB
LOG_BACKUP_COUNT = int(os.environ.get("LOG_BACKUP_COUNT", "3"))  # Number of backup log files to keep

# Debug mode
DEBUG = os.environ.get("DEBUG", "False").lower() == "true"

# Progress bars on stderr during collection
SHOW_PROGRESS = os.environ.get("SEO_RANKMINER_PROGRESS", "True").lower() == "true"


def load_run_config(path=None):
    """Load the TOML run configuration.

    Args:
        path: Config file path. Falls back to SEO_RANKMINER_CONFIG; defaults apply when neither is set.

    Returns:
        A validated RunConfig.

    Raises:
        ConfigError: If the file cannot be read, is not TOML, or fails validation.
    """
    from pydantic import ValidationError
    from ..models.config_models import RunConfig
    from .errors import ConfigError

    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib

    path = path or CONFIG_PATH
    if not path:
        return RunConfig()

    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid TOML in {path}: {e}") from e

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration in {path}: {e}") from e


def dump_run_config(run_config) -> str:
    """Render a RunConfig as TOML text that loads back to an equal config."""
    import tomli_w

    return tomli_w.dumps(run_config.model_dump(mode="json", exclude_none=True))
