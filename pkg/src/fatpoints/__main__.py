import sys

from fatpoints.cli import main

sys.exit(main())
