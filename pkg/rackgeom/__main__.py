import sys

from rackgeom.main import main

sys.exit(main())
