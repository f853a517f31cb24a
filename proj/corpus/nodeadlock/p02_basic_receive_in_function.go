// Pattern: P2 basic-receiveInFunction
// Expected: NoDeadlock
//
// As P1, but the results are received in a separate function.
package main

import "fmt"

func sum(s []int, c chan int) {
	total := 0
	for _, v := range s {
		total += v
	}
	c <- total
}

func collect(c1 chan int, c2 chan int) int {
	x := <-c1
	y := <-c2
	return x + y
}

func main() {
	c1 := make(chan int)
	c2 := make(chan int)
	go sum([]int{7, 2, 8}, c1)
	go sum([]int{-9, 4, 0}, c2)
	fmt.Println(collect(c1, c2))
}
