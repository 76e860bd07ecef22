import sys

from boundent.cli import main

sys.exit(main())
