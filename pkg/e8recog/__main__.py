"""Allow ``python -m e8recog``."""

import sys

from .cli import main

sys.exit(main())
