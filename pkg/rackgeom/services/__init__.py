"""Services for racks, groups, metrics, linear algebra, cohomology and free quandles"""
