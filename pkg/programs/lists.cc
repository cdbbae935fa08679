-- A parametric list type. Without an instantiation the element type A is
-- opaque, which is all the iterators need.
data Nat = Zero | Succ(Nat)
data List(A) = Nil | Cons(A, List(A))

-- an instance: constructors are named Nil{Nat} and Cons{Nat}
name Singleton : Nat -> List(Nat)
rule Singleton.n.c1.c2 -> Cons{Nat}.n.Nil{Nat}.c1.c2
