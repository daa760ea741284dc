import sys

from bac.cli import main

sys.exit(main())
