from .config import (ConfigFile, default_config_event_model, default_config_path, default_config_synth, read_key_value,
                     write_key_value)
from .manifest import RunManifest, file_digest, resolve_seed
from .parallel import distributed_map
