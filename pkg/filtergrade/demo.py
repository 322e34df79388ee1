example_att = """\
# attached primes of top generalized local cohomology:
# Att H^2_m(R/(x), N) = {(x)} sits strictly inside Att H^1_m(N) = {(x), (y)}
ring R = Q[x,y] graded fine;
ideal m = (x, y);
module M = cyclic (x);
module N = cyclic (x) ++ cyclic (y);

att-top a=m M=M N=N;
att-top-local a=m N=N;
"""

fgrade_fixtures = """\
# filter grades, with their constructive, Ext and local cohomology certificates
ring R = Q[x,y] graded fine;
module Mxy = cyclic (x*y);

fgrad a=(x) b=(y) M=R;
fgrad a=(x) b=(y) M=Mxy;
fgrad a=(1) b=(x, y) M=R lc=false;
fgrad a=(x) b=(x, y) M=R;
find-seq a=(x) b=(y) M=R len=2;
fdepth b=(x) M=R;
artin-index a=(x) M=R N=R;
all-artinian a=(x, y) M=R N=R;
"""

local_cohomology = """\
# local cohomology along an ideal and along a filter regular sequence in it
ring R = Q[x,y,z] graded fine;
ideal a = (y, z);
module N = cyclic (x*y, x*z);

filter-check a=a xs=[y, z] M=N;
gamma a=a M=N;
ns-verify a=a xs=[y] M=R N=N window=[-2..2];
cech-table a=(x, y) N=R window=[-2..1];
"""
