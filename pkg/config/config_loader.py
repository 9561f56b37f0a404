import os

import yaml

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_CONFIG_PATH = os.path.join(REPO_ROOT, "config", "config.yaml")


def load_config(config_path=DEFAULT_CONFIG_PATH):
    """
    Load the configuration file.

    A relative `template_dir` is resolved against the directory of the repository,
    so the command works from any working directory.

    Args:
        config_path (str):
            The path to the configuration file.

    Returns:
        dict:
            The loaded configuration as a dictionary.

    Raises:
        Exception: If the file cannot be read or is not a YAML mapping.
    """
    try:
        with open(config_path, "r") as file:
            config = yaml.safe_load(file)
    except (OSError, yaml.YAMLError) as e:
        raise Exception(f"Failed to load configuration from '{config_path}': {e}") from e
    if not isinstance(config, dict):
        raise Exception(f"Configuration in '{config_path}' must be a mapping")
    template_dir = config.get("template_dir")
    if template_dir and not os.path.isabs(template_dir):
        config["template_dir"] = os.path.join(REPO_ROOT, template_dir)
    return config
