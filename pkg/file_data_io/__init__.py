from .file_data_io import (
    FileDataIO
)
