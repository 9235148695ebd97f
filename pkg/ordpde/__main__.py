import sys

from ordpde.cli import main

sys.exit(main())
