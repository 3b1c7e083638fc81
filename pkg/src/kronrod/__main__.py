import sys

from kronrod.cli import main

sys.exit(main())
