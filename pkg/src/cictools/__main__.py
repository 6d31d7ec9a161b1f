import sys

from cictools.cli import main

sys.exit(main())
