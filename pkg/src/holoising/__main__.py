import sys

from holoising.cli import main

sys.exit(main())
