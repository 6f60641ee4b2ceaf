import sys

from featad.cli import main

sys.exit(main())
